"""Generation of configurations: exhaustive, uniform, and conditioned.

Sampling measure is uniform over set partitions of the half-edges into
d-blocks.  The sequential-assignment count (which orders the d slots of a
vertex) disagrees with the partition count by ((d-1)!)^(lm/d) for d >= 3;
all probability formulas here are ratios in which that factor cancels, and
count_configurations reports both numbers.

Every sampling call owns its generator state: the per-call RNG is derived
from (seed, optional trial key), so parallel harnesses are reproducible
regardless of scheduling.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterator

import numpy as np

from .core import Hypergraph, Matching, Params
from .errors import CapExceeded, InfeasibleError, NonIntegralError, RangeError

DEFAULT_ENUM_CAP = 10**7


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Deterministic, splittable stream: one PCG64 per (seed, key) pair."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def count_configurations(params: Params) -> tuple[int, int]:
    """(sequential-assignment count, set-partition count) of the ensemble.

    The first is (lm)! / (d^(lm/d) (lm/d)!), the second
    (lm)! / ((d!)^(lm/d) (lm/d)!); they agree iff d = 2.
    """
    lm, nv, d = params.half_edges, params.n_vertices, params.d
    flm = math.factorial(lm)
    paper_count = flm // (d**nv * math.factorial(nv))
    partition_count = flm // (math.factorial(d) ** nv * math.factorial(nv))
    return paper_count, partition_count


def _partitions(labels: tuple[int, ...], d: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All partitions of `labels` into d-blocks, canonical lexicographic order."""
    if not labels:
        yield ()
        return
    first, rest = labels[0], labels[1:]
    for comb in itertools.combinations(rest, d - 1):
        taken = set(comb)
        remaining = tuple(x for x in rest if x not in taken)
        block = (first,) + comb
        for tail in _partitions(remaining, d):
            yield (block,) + tail


def enumerate_all(params: Params, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Hypergraph]:
    """Yield every instance exactly once (blocks ordered by least element)."""
    _, partition_count = count_configurations(params)
    if partition_count > cap:
        raise CapExceeded(
            f"{partition_count} instances exceed the enumeration cap {cap}"
        )
    labels = tuple(range(params.half_edges))
    vertex_of = np.empty(params.half_edges, dtype=np.int32)
    for blocks in _partitions(labels, params.d):
        for vid, block in enumerate(blocks):
            for h in block:
                vertex_of[h] = vid
        yield Hypergraph(params, vertex_of.copy())


def sample_uniform(params: Params, seed: int, trial: int | None = None) -> Hypergraph:
    """One instance uniform over set partitions; deterministic in (seed, trial)."""
    rng = rng_for(seed) if trial is None else rng_for(seed, trial)
    perm = rng.permutation(params.half_edges)
    vertex_of = np.empty(params.half_edges, dtype=np.int32)
    vertex_of[perm] = np.arange(params.half_edges, dtype=np.int32) // params.d
    return Hypergraph(params, vertex_of).canonical()


def sample_conditional_on_matching(
    params: Params, k: int, seed: int, trial: int | None = None
) -> tuple[Hypergraph, Matching]:
    """Uniform over instances in which edges {0,..,k-1} form a matching.

    Constructive (no rejection): each of the l*k matched half-edges gets its
    own vertex filled with d-1 partners drawn without replacement from the
    unmatched half-edges; the remaining unmatched half-edges are partitioned
    uniformly into d-blocks.
    """
    m, d, l = params.m, params.d, params.l
    if k < 0 or k != int(k):
        raise RangeError(f"matching size k={k} must be a non-negative integer")
    if l * k * d > l * m:
        raise InfeasibleError(
            f"k={k} matched edges need {l * k * d} half-edges but only {l * m} exist"
        )
    lk = l * k
    rng = rng_for(seed) if trial is None else rng_for(seed, trial)
    perm = rng.permutation(np.arange(lk, params.half_edges, dtype=np.int32))
    vertex_of = np.empty(params.half_edges, dtype=np.int32)
    vertex_of[:lk] = np.arange(lk, dtype=np.int32)
    partners = perm[: lk * (d - 1)]
    vertex_of[partners] = np.arange(lk * (d - 1), dtype=np.int32) // (d - 1)
    rest = perm[lk * (d - 1) :]
    vertex_of[rest] = lk + np.arange(rest.shape[0], dtype=np.int32) // d
    return Hypergraph(params, vertex_of).canonical(), Matching(range(k))


def prob_fixed_matching(params: Params, k: int) -> Fraction:
    """Exact probability that a fixed set of k hyperedges is a matching.

    Equals (lm-lk)! d^(lk) (lm/d)! / ((lm)! (lm/d - lk)!); by edge symmetry
    the value does not depend on which k edges are fixed.
    """
    if k != int(k):
        raise NonIntegralError(f"matching size k={k} must be an integer")
    k = int(k)
    if k < 0 or k > params.max_matching_size:
        raise RangeError(
            f"k={k} outside [0, m/d] = [0, {params.max_matching_size}]"
        )
    lm, nv, d, lk = params.half_edges, params.n_vertices, params.d, params.l * k
    num = math.factorial(lm - lk) * d**lk * math.factorial(nv)
    den = math.factorial(lm) * math.factorial(nv - lk)
    return Fraction(num, den)
