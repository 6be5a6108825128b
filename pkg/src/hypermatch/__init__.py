"""Matchings on random (d,l)-regular uniform hypergraphs.

Exact ensemble moments at finite m, free-energy functionals and their
optimizers, replica-symmetry condition checkers, cycle statistics under
matching conditioning, maximal-matching asymptotics, and brute-force
oracles at desk scale.
"""

from .core import (
    CycleCensus,
    ExactRational,
    Hypergraph,
    Matching,
    Params,
    hyperedge_of,
    is_matching,
    make_params,
)

__version__ = "0.1.0"

__all__ = [
    "CycleCensus",
    "ExactRational",
    "Hypergraph",
    "Matching",
    "Params",
    "hyperedge_of",
    "is_matching",
    "make_params",
    "__version__",
]
