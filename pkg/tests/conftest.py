"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import itertools

import pytest

from hypermatch import is_matching, make_params


SMALL_ENSEMBLES = [(2, 2, 2), (3, 2, 2), (4, 2, 2), (2, 3, 3), (2, 2, 3), (4, 2, 3)]


def naive_size_counts(G) -> list[int]:
    """Matching counts by brute force over all 2^m edge subsets."""
    m = G.params.m
    out = [0] * (G.params.max_matching_size + 1)
    for r in range(m + 1):
        for subset in itertools.combinations(range(m), r):
            if is_matching(G, subset):
                out[r] += 1
    return out


@pytest.fixture(scope="session")
def p222():
    return make_params(2, 2, 2)


@pytest.fixture(scope="session")
def p322():
    return make_params(3, 2, 2)


@pytest.fixture(scope="session")
def p233():
    return make_params(2, 3, 3)
