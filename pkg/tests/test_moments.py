import itertools
import math
from fractions import Fraction

import pytest

from conftest import SMALL_ENSEMBLES
from hypermatch import analytic as an
from hypermatch import is_matching, make_params
from hypermatch import moments as mo
from hypermatch.counting import count_by_size, cycle_census
from hypermatch.errors import NonIntegralError, NoRootError, RangeError
from hypermatch.sampler import count_configurations, enumerate_all


def test_expected_Zk_examples(p222):
    assert mo.expected_Zk(p222, 1) == Fraction(4, 3)
    assert mo.expected_Zk(p222, 0) == 1
    assert mo.expected_Zk(p222, 2) == 0  # above m/d
    assert mo.expected_Z(p222) == Fraction(7, 3)


def test_expected_Zk_product_form(p322):
    # sequential-assignment product form of the first moment
    m, d, l = p322.m, p322.d, p322.l
    for k in range(p322.max_matching_size + 1):
        lm = l * m
        prod = Fraction(math.comb(m, k))
        for j in range(d - 1):
            for i in range(l * k):
                prod *= Fraction(lm * (m - k) // m - (d - 1) * i - j, lm - 1 - d * i - j)
        assert prod == mo.expected_Zk(p322, k)


def test_expected_Zk_rejects_non_integer(p222):
    with pytest.raises(NonIntegralError):
        mo.expected_Zk(p222, 0.5)
    with pytest.raises(RangeError):
        mo.expected_Zk(p222, -1)


def test_second_moment_examples(p222):
    assert mo.second_moment(p222, 1) == Fraction(8, 3)
    # the fully-overlapping term equals the first moment
    assert mo.second_moment_term(p222, 1, 1, 0) == mo.expected_Zk(p222, 1)
    with pytest.raises(RangeError):
        mo.second_moment_term(p222, 1, 2, 0)


def test_second_moment_at_least_square_of_mean():
    for m, d, l in SMALL_ENSEMBLES:
        params = make_params(m, d, l)
        for k in range(params.max_matching_size + 1):
            assert mo.second_moment(params, k) >= mo.expected_Zk(params, k) ** 2


def test_all_moments_match_enumeration_oracle():
    b = 3
    for m, d, l in SMALL_ENSEMBLES:
        params = make_params(m, d, l)
        _, n = count_configurations(params)
        kmax = params.max_matching_size
        zk = [Fraction(0)] * (kmax + 1)
        zk2 = [Fraction(0)] * (kmax + 1)
        cond = {km: [0, [0] * b] for km in range(kmax + 1)}
        for G in enumerate_all(params):
            counts = count_by_size(G)
            census = cycle_census(G, b).counts
            for k, z in enumerate(counts):
                zk[k] += z
                zk2[k] += z * z
            for km in range(kmax + 1):
                if is_matching(G, range(km)):
                    cond[km][0] += 1
                    for i in range(b):
                        cond[km][1][i] += census[i]
        for k in range(kmax + 1):
            assert Fraction(zk[k], n) == mo.expected_Zk(params, k)
            assert Fraction(zk2[k], n) == mo.second_moment(params, k)
        assert sum(zk, Fraction(0)) / n == mo.expected_Z(params)
        for km, (hits, sums) in cond.items():
            for i in range(b):
                assert Fraction(sums[i], hits) == mo.conditional_cycle_expectation(
                    params, km, i + 1
                )


def test_moment_symmetry_over_labeled_edge_choices():
    # conditioning on any specific k-subset of edges gives the same count
    params = make_params(4, 2, 2)
    for k in range(params.max_matching_size + 1):
        hits = {
            subset: sum(1 for G in enumerate_all(params) if is_matching(G, subset))
            for subset in itertools.combinations(range(params.m), k)
        }
        assert len(set(hits.values())) == 1


def test_conditional_cycle_tiny_case_is_zero(p222):
    assert mo.conditional_cycle_expectation(p222, 1, 1) == 0


def test_conditional_cycle_approaches_limit():
    params = make_params(2000, 3, 3)
    for k in (1, 2, 3):
        exact = float(mo.conditional_cycle_expectation(params, 200, k))
        mu = an.mu_k(3, 3, 0.1, k)
        assert abs(exact - mu) / mu < 0.01


def test_stirling_factorial_bounds():
    lo, hi = mo.stirling_factorial_bounds(5)
    assert lo <= 120 <= hi
    for n in (1, 2, 10, 40):
        lo, hi = mo.stirling_factorial_bounds(n)
        assert lo <= math.factorial(n) <= hi


def test_sandwich_brackets_exact_moment():
    for d, l in [(2, 2), (3, 2), (2, 3)]:
        for m in range(2, 41):
            if (l * m) % d:
                continue
            params = make_params(m, d, l)
            for h in range(1, params.max_matching_size):
                s = mo.stirling_sandwich(params, h)
                value = float(mo.expected_Zk(params, h))
                assert s["lower"] <= value <= s["upper"], (d, l, m, h)
                assert s["lower"] <= s["upper"]


def test_sandwich_correction_ratio_tends_to_one():
    prev = None
    for m in (100, 1000, 10000, 100000):
        params = make_params(m, 2, 2)
        s = mo.stirling_sandwich(params, int(0.27 * m))
        gap = s["A"] / s["B"] - 1
        assert gap < 10 / m
        if prev is not None:
            assert gap < prev
        prev = gap


def test_sandwich_range_errors(p222):
    with pytest.raises(RangeError):
        mo.stirling_sandwich(p222, 0)
    with pytest.raises(RangeError):
        mo.stirling_sandwich(make_params(10, 2, 2), 5)  # h = m/d


def test_log_path_matches_exact():
    params = make_params(40, 2, 2)
    for k in range(params.max_matching_size + 1):
        exact = mo.expected_Zk(params, k)
        if exact == 0:
            continue
        assert mo.expected_Zk_float(params, k) == pytest.approx(float(exact), rel=1e-10)
    # real-index continuation agrees at integers
    assert mo.expected_Zk_real(params, 7) == pytest.approx(
        float(mo.expected_Zk(params, 7)), rel=1e-10
    )


def test_normalized_first_moment_window_invariance():
    params = make_params(400, 2, 2)
    full = mo.normalized_first_moment(params)
    windowed = mo.normalized_first_moment(params, window=5.0)
    assert windowed == pytest.approx(full, abs=1e-9)


def test_tail_expectation_decreasing():
    params = make_params(300, 3, 3)
    tails = [mo.tail_expectation(params, C) for C in (1, 5, 10)]
    assert tails[0] > tails[1] > tails[2] >= 0
    with pytest.raises(NoRootError):
        mo.tail_expectation(make_params(10, 2, 2), 1)


def test_tail_expectation_geometric_bound():
    # sum of the decaying terms stays under the geometric-series bound
    params = make_params(900, 3, 3)
    info = an.maximal_matching_asymptotics(3, 3, 900)
    slope = an.phi_prime(3, 3, info["beta0"])
    for C in (1, 3, 5):
        bound = (
            math.exp(slope * C) / (1 - math.exp(slope))
        ) * info["prefactor"] + 1 / params.m
        assert mo.tail_expectation(params, C) <= bound * 1.2


def test_maximal_matching_report():
    params = make_params(900, 3, 3)
    rep = mo.maximal_matching_report(params)
    assert rep["EZ_floor"] > rep["EZ_at_Km"] > rep["EZ_ceil"]
    assert rep["EZ_at_Km"] == pytest.approx(rep["prefactor"], rel=0.10)
