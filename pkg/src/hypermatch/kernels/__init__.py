"""Kernel backend selection: compiled extension if present, else pure Python.

Set HYPERMATCH_FORCE_PY=1 in the environment to force the fallback (used by
the benchmark and the backend-equivalence tests).
"""

import os

from . import _ref

if os.environ.get("HYPERMATCH_FORCE_PY"):
    _impl = _ref
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _ref

BACKEND = _impl.BACKEND
size_counts = _impl.size_counts
census_counts = _impl.census_counts

__all__ = ["BACKEND", "size_counts", "census_counts", "_ref"]
