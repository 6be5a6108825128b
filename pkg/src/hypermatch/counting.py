"""Exact per-instance computation: matching counts, weighted partition
function, maximal matching size, and the cycle census.

Counting all matchings is #P-hard in general; the depth-first search is
exact and feasible at desk scale only.  A node budget makes failure
explicit (BudgetExceeded) rather than silent.
"""

from __future__ import annotations

from typing import Sequence

from . import kernels
from .core import CycleCensus, Hypergraph
from .errors import BudgetExceeded, DomainError

DEFAULT_NODE_BUDGET = 10**9


def count_by_size(G: Hypergraph, node_budget: int = DEFAULT_NODE_BUDGET) -> list[int]:
    """[Z_0, ..., Z_{floor(m/d)}]: number of matchings with k edges each.

    Z_0 = 1 always (the empty matching).  Every matching visited costs one
    budget node.
    """
    if not G.validate():
        raise DomainError("invalid hypergraph: vertex degrees are not all d")
    p = G.params
    counts, nodes = kernels.size_counts(
        G.vertex_of, p.m, p.l, p.n_vertices, p.max_matching_size, node_budget
    )
    if nodes < 0:
        raise BudgetExceeded(f"matching DFS exceeded node budget {node_budget}")
    return [int(c) for c in counts]


def count_all_matchings(G: Hypergraph, node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    return sum(count_by_size(G, node_budget))


def weighted_partition(
    G: Hypergraph,
    x: float,
    node_budget: int = DEFAULT_NODE_BUDGET,
    coefficients: Sequence[int] | None = None,
) -> tuple[float, list[int]]:
    """Z(x) = sum_k Z_k x^k, with the exact coefficient vector.

    Pass a precomputed count_by_size result as `coefficients` to evaluate
    at several x without recounting.
    """
    if x <= 0:
        raise DomainError(f"weight x must be positive, got {x}")
    coeffs = list(coefficients) if coefficients is not None else count_by_size(G, node_budget)
    value = 0.0
    for k in reversed(range(len(coeffs))):  # Horner
        value = value * x + coeffs[k]
    return value, coeffs


def max_matching(G: Hypergraph, node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Largest k with Z_k > 0."""
    counts = count_by_size(G, node_budget)
    return max(k for k, c in enumerate(counts) if c > 0)


def cycle_census(G: Hypergraph, b: int) -> CycleCensus:
    """Cycle counts C_1..C_b.

    A k-cycle is a closed alternating vertex/hyperedge sequence with k
    distinct vertices, k pairwise-distinct hyperedges and an injective
    choice of half-edges (one entering and one leaving pair per edge);
    rotations and reflections identified.  A 1-cycle is an unordered pair
    of half-edges of one hyperedge lying in the same vertex.
    """
    if b < 1:
        raise DomainError(f"census length b must be >= 1, got {b}")
    p = G.params
    counts = kernels.census_counts(G.vertex_of, p.m, p.l, p.n_vertices, b)
    return CycleCensus(tuple(int(c) for c in counts))
