"""Data model for (d,l)-regular hypergraph configurations.

An instance on m hyperedges is a partition of the l*m labeled half-edges
into blocks of size d (the vertices).  Half-edge i belongs to hyperedge
i // l, so hyperedges are implicit and only the half-edge -> vertex map is
stored.  Vertices are unlabeled in the ensemble: two vertex maps equal up
to relabeling denote the same instance, and equality/hashing go through a
canonical relabeling (vertex ids in order of first appearance).

All types are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .errors import DivisibilityError, DomainError

# Exact rationals are the currency of the moments engine; the stdlib type
# already provides normalized arbitrary-precision p/q.
ExactRational = Fraction


@dataclass(frozen=True)
class Params:
    """Ensemble parameters (m hyperedges, vertex degree d, edge size l).

    Requires m >= 1, d >= 2, l >= 2 and d | l*m; there are l*m half-edges
    and l*m/d vertices.
    """

    m: int
    d: int
    l: int

    def __post_init__(self) -> None:
        if self.m < 1 or int(self.m) != self.m:
            raise DomainError(f"m must be a positive integer, got {self.m}")
        if self.d < 2 or int(self.d) != self.d:
            raise DomainError(f"d must be an integer >= 2, got {self.d}")
        if self.l < 2 or int(self.l) != self.l:
            raise DomainError(f"l must be an integer >= 2, got {self.l}")
        if (self.l * self.m) % self.d != 0:
            raise DivisibilityError(
                f"d={self.d} does not divide l*m={self.l * self.m}; no such hypergraph exists"
            )

    @property
    def half_edges(self) -> int:
        return self.l * self.m

    @property
    def n_vertices(self) -> int:
        return (self.l * self.m) // self.d

    @property
    def max_matching_size(self) -> int:
        """Degree-counting bound: a matching occupies l distinct vertices per edge."""
        return self.m // self.d


def make_params(m: int, d: int, l: int) -> Params:
    """Validated constructor; raises DivisibilityError / DomainError."""
    return Params(m, d, l)


def hyperedge_of(params: Params, half_edge: int) -> int:
    """Index of the hyperedge containing a half-edge (0-based: floor(i/l))."""
    if not 0 <= half_edge < params.half_edges:
        raise IndexError(f"half-edge {half_edge} out of range [0, {params.half_edges})")
    return half_edge // params.l


class Hypergraph:
    """A concrete configuration: params plus the half-edge -> vertex map."""

    __slots__ = ("params", "vertex_of", "_key")

    def __init__(self, params: Params, vertex_of) -> None:
        arr = np.ascontiguousarray(vertex_of, dtype=np.int32)
        arr.setflags(write=False)
        self.params = params
        self.vertex_of = arr
        self._key: bytes | None = None

    def validate(self) -> bool:
        """True iff every vertex id in [0, lm/d) occurs exactly d times."""
        p = self.params
        if self.vertex_of.shape != (p.half_edges,):
            return False
        counts = np.bincount(self.vertex_of, minlength=p.n_vertices)
        return bool(
            counts.shape[0] == p.n_vertices and np.all(counts == p.d)
        ) and bool(np.all(self.vertex_of >= 0))

    def edge_vertices(self, edge: int) -> np.ndarray:
        """Vertex ids of the l half-edges of one hyperedge."""
        l = self.params.l
        return self.vertex_of[edge * l : (edge + 1) * l]

    @property
    def edge_vertex_matrix(self) -> np.ndarray:
        """m x l matrix; row e holds the vertices of hyperedge e."""
        return self.vertex_of.reshape(self.params.m, self.params.l)

    def canonical_labels(self) -> np.ndarray:
        """vertex_of relabeled so ids appear in order of first occurrence."""
        p = self.params
        first = np.full(p.n_vertices, p.half_edges, dtype=np.int64)
        np.minimum.at(first, self.vertex_of, np.arange(p.half_edges))
        rank = np.empty(p.n_vertices, dtype=np.int32)
        rank[np.argsort(first, kind="stable")] = np.arange(p.n_vertices, dtype=np.int32)
        return rank[self.vertex_of]

    def canonical(self) -> "Hypergraph":
        return Hypergraph(self.params, self.canonical_labels())

    def canonical_key(self) -> bytes:
        if self._key is None:
            self._key = self.canonical_labels().tobytes()
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.params == other.params and self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash((self.params, self.canonical_key()))

    def __repr__(self) -> str:
        return f"Hypergraph(m={self.params.m}, d={self.params.d}, l={self.params.l})"

    # -- serialization ---------------------------------------------------

    def to_json(self) -> str:
        p = self.params
        return json.dumps(
            {"m": p.m, "d": p.d, "l": p.l, "vertex_of": self.vertex_of.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        obj = json.loads(text)
        return cls(make_params(obj["m"], obj["d"], obj["l"]), obj["vertex_of"])

    def to_line(self) -> str:
        p = self.params
        body = " ".join(str(int(v)) for v in self.vertex_of)
        return f"{p.m} {p.d} {p.l} : {body}"

    @classmethod
    def from_line(cls, line: str) -> "Hypergraph":
        head, _, body = line.partition(":")
        m, d, l = (int(tok) for tok in head.split())
        vertex_of = [int(tok) for tok in body.split()]
        return cls(make_params(m, d, l), vertex_of)


@dataclass(frozen=True)
class Matching:
    """A set of hyperedge indices, stored sorted and deduplicated."""

    edges: tuple[int, ...]

    def __init__(self, edges: Iterable[int] = ()) -> None:
        object.__setattr__(self, "edges", tuple(sorted(set(int(e) for e in edges))))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[int]:
        return iter(self.edges)


def is_matching(G: Hypergraph, M: Matching | Iterable[int]) -> bool:
    """True iff no vertex holds half-edges of two matched edges.

    The within-edge case counts: an edge two of whose own half-edges share
    a vertex is not even a singleton matching (each matched half-edge must
    occupy its own vertex).
    """
    edges = M.edges if isinstance(M, Matching) else tuple(M)
    p = G.params
    seen: set[int] = set()
    for e in edges:
        if not 0 <= e < p.m:
            raise IndexError(f"edge index {e} out of range [0, {p.m})")
        for v in G.edge_vertices(e):
            if v in seen:
                return False
            seen.add(int(v))
    return True


@dataclass(frozen=True)
class CycleCensus:
    """Counts of k-cycles for k = 1..b on one instance."""

    counts: tuple[int, ...]

    @property
    def b(self) -> int:
        return len(self.counts)

    def __getitem__(self, k: int) -> int:
        """Count of k-cycles (1-based k)."""
        if not 1 <= k <= len(self.counts):
            raise IndexError(f"cycle length {k} outside census range 1..{len(self.counts)}")
        return self.counts[k - 1]
