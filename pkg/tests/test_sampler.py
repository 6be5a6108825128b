import math
from collections import Counter
from fractions import Fraction

import pytest

from hypermatch import is_matching, make_params
from hypermatch.errors import CapExceeded, InfeasibleError, RangeError
from hypermatch.sampler import (
    count_configurations,
    enumerate_all,
    prob_fixed_matching,
    sample_conditional_on_matching,
    sample_uniform,
)


def test_count_configurations_examples(p222, p233):
    assert count_configurations(p222) == (3, 3)
    assert count_configurations(p233) == (40, 10)
    # single-vertex case lm = d: sequential count (d-1)!, one partition
    p = make_params(2, 4, 2)
    assert count_configurations(p) == (math.factorial(3), 1)


def test_enumerate_all_counts(p222, p322, p233):
    assert len(list(enumerate_all(p222))) == 3
    assert len(list(enumerate_all(p322))) == 15  # 5!! pairings of 6 half-edges
    assert len(list(enumerate_all(p233))) == 10
    assert len(set(enumerate_all(p322))) == 15  # pairwise distinct instances


def test_enumerate_cap(p322):
    with pytest.raises(CapExceeded):
        list(enumerate_all(p322, cap=10))


def test_enumerate_instances_are_valid(p233):
    for G in enumerate_all(p233):
        assert G.validate()


def test_sample_uniform_determinism_and_validity(p322):
    a = sample_uniform(p322, 99)
    b = sample_uniform(p322, 99)
    assert a == b and (a.vertex_of == b.vertex_of).all()
    for seed in range(50):
        assert sample_uniform(p322, seed).validate()


def test_sample_uniform_frequencies(p222, p233):
    # every instance within 4 binomial sigmas of 1/partition_count at 1e5 samples
    for params, n_instances in ((p222, 3), (p233, 10)):
        n = 100_000
        counts = Counter(
            sample_uniform(params, 4242, t).canonical_key() for t in range(n)
        )
        assert len(counts) == n_instances
        p = 1 / n_instances
        sigma = math.sqrt(n * p * (1 - p))
        for key, c in counts.items():
            assert abs(c - n * p) < 4 * sigma


def test_conditional_sampler_postcondition(p322):
    for trial in range(200):
        G, M = sample_conditional_on_matching(p322, 1, 7, trial)
        assert is_matching(G, M)
        assert G.validate()


def test_conditional_sampler_infeasible():
    p = make_params(4, 2, 3)
    with pytest.raises(InfeasibleError):
        sample_conditional_on_matching(p, 3, 0)  # needs 18 > 12 half-edges


def test_conditional_matches_rejection_law():
    # TV distance between constructive sampler and uniform-filtered law
    from hypermatch.core import Hypergraph
    from hypermatch.sampler import rng_for

    for m, d, l in [(2, 2, 2), (3, 2, 2), (2, 3, 3)]:
        params = make_params(m, d, l)
        k = min(1, params.max_matching_size)
        n = 100_000
        cond = Counter(
            sample_conditional_on_matching(params, k, 11, t)[0].canonical_key()
            for t in range(n)
        )
        # rejection oracle: batched uniform stream filtered on the matching
        rng = rng_for(13)
        rej: Counter = Counter()
        kept = 0
        import numpy as np

        while kept < n:
            perm = rng.permutation(params.half_edges)
            vertex_of = np.empty(params.half_edges, dtype=np.int32)
            vertex_of[perm] = np.arange(params.half_edges, dtype=np.int32) // d
            G = Hypergraph(params, vertex_of)
            if is_matching(G, range(k)):
                rej[G.canonical_key()] += 1
                kept += 1
        keys = set(cond) | set(rej)
        tv = 0.5 * sum(abs(cond[key] / n - rej[key] / n) for key in keys)
        assert tv < 0.02, (m, d, l, tv)


def test_prob_fixed_matching_examples(p222):
    assert prob_fixed_matching(p222, 1) == Fraction(2, 3)
    assert prob_fixed_matching(p222, 0) == 1
    with pytest.raises(RangeError):
        prob_fixed_matching(p222, 2)  # above m/d


def test_prob_fixed_matching_equals_conditioned_count(p322, p233):
    for params in (p322, p233):
        _, total = count_configurations(params)
        for k in range(params.max_matching_size + 1):
            hits = sum(1 for G in enumerate_all(params) if is_matching(G, range(k)))
            assert prob_fixed_matching(params, k) == Fraction(hits, total)
            # the conditioned-instance count is an exact integer
            assert (prob_fixed_matching(params, k) * total).denominator == 1
