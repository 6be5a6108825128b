"""Exact arbitrary-precision ensemble expectations at finite m.

Every formula is evaluated at integer matching sizes only (beta enters as
k/m with k integral), so all factorial arguments are integers whenever
d | l*m; this is asserted, never rounded.  Exact rationals are the default
and the authority for tests; a log-gamma path at 80-bit precision serves
the large-m scans where the rationals would be needlessly heavy.

Group-out-of-range semantics: the conditional cycle expectation is a sum of
placement counts; a binomial or falling factorial asked for more objects
than exist contributes zero (there is no such placement), matching the
brute-force oracle on tiny ensembles.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from . import analytic
from .core import Params
from .errors import NonIntegralError, NoRootError, RangeError

_LOG_PREC_BITS = 80


def _as_int(value, name: str) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise NonIntegralError(f"{name}={value!r} must be an integer")
    return int(value)


def _comb(n: int, r: int) -> int:
    """Binomial with zero outside 0 <= r <= n (no placements)."""
    if r < 0 or n < 0 or r > n:
        return 0
    return math.comb(n, r)


def _falling(n: int, r: int) -> int:
    """Falling factorial n (n-1) ... (n-r+1); zero when fewer than r objects."""
    if r < 0:
        raise RangeError(f"falling factorial length {r} must be >= 0")
    if n < 0 or r > n:
        return 0
    return math.perm(n, r)


# ---------------------------------------------------------------------------
# first moment


def expected_Zk(params: Params, k) -> Fraction:
    """Exact E[Z_k], the expected number of matchings with k hyperedges.

    Zero above the degree bound m/d.  Equals C(m, k) times the probability
    that a fixed set of k hyperedges is a matching.
    """
    k = _as_int(k, "k")
    if k < 0:
        raise RangeError(f"k={k} must be >= 0")
    if k > params.max_matching_size:
        return Fraction(0)
    m, d, lm, nv = params.m, params.d, params.half_edges, params.n_vertices
    lk = params.l * k
    num = math.comb(m, k) * math.factorial(lm - lk) * d**lk * math.factorial(nv)
    den = math.factorial(lm) * math.factorial(nv - lk)
    return Fraction(num, den)


def expected_Z(params: Params) -> Fraction:
    """Exact E[Z] = sum of E[Z_k] over all feasible sizes."""
    return sum(
        (expected_Zk(params, k) for k in range(params.max_matching_size + 1)),
        Fraction(0),
    )


# ---------------------------------------------------------------------------
# second moment


def _pair_term_numerator(params: Params, k: int, s: int, t: int) -> int:
    """One overlap term of E[Z_k^2], scaled by (lm)! so it is an integer."""
    m, d, l = params.m, params.d, params.l
    nv = params.n_vertices
    lk, ls = l * k, l * s
    a = lk - ls  # cross half-edges per matching
    b = 2 * lk - ls - t  # vertices consumed by the double configuration
    if m - 2 * k + s < 0:
        return 0
    multinom = (
        math.factorial(m)
        // math.factorial(s)
        // math.factorial(k - s) ** 2
        // math.factorial(m - 2 * k + s)
    )
    return (
        multinom
        * (d - 1) ** t
        * _comb(a, t) ** 2
        * math.factorial(t)
        * math.factorial(l * (m - 2 * k + s))
        * d**b
        * _falling(nv, b)
    )


def _pair_index_bounds(params: Params, k: int, s: int) -> tuple[int, int]:
    l, nv = params.l, params.n_vertices
    return max(0, 2 * l * k - l * s - nv), l * k - l * s


def second_moment_term(params: Params, k, s, t) -> Fraction:
    """Exact overlap term F(s, t) of E[Z_k^2] (s shared edges, t cross-touches)."""
    k = _as_int(k, "k")
    s = _as_int(s, "s")
    t = _as_int(t, "t")
    if not 0 <= k <= params.max_matching_size:
        raise RangeError(f"k={k} outside [0, {params.max_matching_size}]")
    if not 0 <= s <= k:
        raise RangeError(f"s={s} outside [0, k={k}]")
    t_lo, t_hi = _pair_index_bounds(params, k, s)
    if not t_lo <= t <= t_hi:
        raise RangeError(f"t={t} outside [{t_lo}, {t_hi}] at (k, s)=({k}, {s})")
    return Fraction(
        _pair_term_numerator(params, k, s, t), math.factorial(params.half_edges)
    )


def second_moment(params: Params, k) -> Fraction:
    """Exact E[Z_k^2] as the double sum of overlap terms.

    Terms are advanced by a multiplicative recurrence in t (integer-exact at
    every step), with one fresh evaluation per s.
    """
    k = _as_int(k, "k")
    if k < 0:
        raise RangeError(f"k={k} must be >= 0")
    if k > params.max_matching_size:
        return Fraction(0)
    d, l, nv = params.d, params.l, params.n_vertices
    total = 0
    for s in range(k + 1):
        t_lo, t_hi = _pair_index_bounds(params, k, s)
        term = _pair_term_numerator(params, k, s, t_lo)
        if term == 0:
            continue
        total += term
        a = l * k - l * s
        for t in range(t_lo, t_hi):
            # F(s, t+1) / F(s, t) = (d-1)(a-t)^2 / ((t+1) d (nv - b + 1)),
            # with b = 2lk - ls - t the vertex count at step t
            b = 2 * l * k - l * s - t
            term = term * (d - 1) * (a - t) ** 2 // ((t + 1) * d * (nv - b + 1))
            total += term
    return Fraction(total, math.factorial(params.half_edges))


# ---------------------------------------------------------------------------
# conditional cycle expectation


def _cond_cycle_term(params: Params, K: int, k: int, t: int, s: int) -> Fraction:
    """Expected count of k-cycles sharing t edges and s extra vertices with
    the conditioned matching of K edges."""
    m, d, l = params.m, params.d, params.l
    lm, nv = params.half_edges, params.n_vertices
    lK = l * K
    free = k - 2 * t - s  # cycle vertices not touching the matching
    if free < 0:
        return Fraction(0)
    ll = l * (l - 1)
    if t >= 1:
        ways = (
            _comb(K, t)
            * math.factorial(t - 1)
            * _comb(k - t - 1, t - 1)
            * ll**t
            * _comb(m - K, k - t)
            * math.factorial(k - t)
            * ll ** (k - t)
        )
        touch = _comb(lK - 2 * t, s) * _comb(k - 2 * t, s) * math.factorial(s)
    else:
        ways = _comb(m - K, k) * math.factorial(k - 1) * ll**k
        touch = _comb(lK, s) * _comb(k, s) * math.factorial(s)
    unmatched_used = _falling(lm - lK, 2 * (k - t))
    if unmatched_used == 0:
        return Fraction(0)
    placements = d**free * _falling(nv - lK, free)
    num = ways * (d - 1) ** k * (d - 2) ** s * touch * placements
    return Fraction(num, 2 * unmatched_used)


def conditional_cycle_expectation(params: Params, k_match, k_cycle) -> Fraction:
    """Exact E[C_k | a fixed set of k_match edges is a matching] at finite m."""
    K = _as_int(k_match, "k_match")
    k = _as_int(k_cycle, "k_cycle")
    if not 0 <= K <= params.max_matching_size:
        raise RangeError(f"k_match={K} outside [0, {params.max_matching_size}]")
    if k < 1:
        raise RangeError(f"k_cycle={k} must be >= 1")
    total = Fraction(0)
    for t in range(k // 2 + 1):
        for s in range(k - 2 * t + 1):
            total += _cond_cycle_term(params, K, k, t, s)
    return total


# ---------------------------------------------------------------------------
# Stirling sandwich


def stirling_factorial_bounds(n: int) -> tuple[float, float]:
    """Two-sided Stirling bounds on n! (hard inequalities, not asymptotics)."""
    if n < 1:
        raise RangeError(f"n={n} must be >= 1")
    base = math.sqrt(2 * math.pi * n) * (n / math.e) ** n
    return base * math.exp(1 / (12 * n + 1)), base * math.exp(1 / (12 * n))


def stirling_sandwich(params: Params, h) -> dict:
    """Hard two-sided bounds on E[Z_h] from the factorial sandwich.

    Valid for 1 <= h <= m/d - 1.  Returns the bracket plus the two
    correction factors A (upper) and B (lower); A/B -> 1 as m grows.
    """
    h = _as_int(h, "h")
    m, d, l = params.m, params.d, params.l
    if not 1 <= h <= params.max_matching_size - 1:
        raise RangeError(f"h={h} outside [1, m/d - 1] = [1, {params.max_matching_size - 1}]")
    a_corr = math.exp(
        1 / (12 * m)
        + 1 / (12 * l * (m - h))
        + d / (12 * m * l)
        - 1 / (12 * h + 1)
        - 1 / (12 * (m - h) + 1)
        - 1 / (12 * m * l + 1)
        - d / (12 * l * (m - h * d) + d)
    )
    b_corr = math.exp(
        1 / (12 * m + 1)
        + 1 / (12 * l * (m - h) + 1)
        + d / (12 * l * m + d)
        - 1 / (12 * h)
        - 1 / (12 * (m - h))
        - 1 / (12 * l * m)
        - d / (12 * l * (m - h * d))
    )
    beta = h / m
    try:
        center = math.exp(m * analytic.phi(d, l, beta)) / math.sqrt(
            2 * m * math.pi * beta * (1 - d * beta)
        )
    except OverflowError:  # bracket astronomically large; corrections still exact
        center = math.inf
    return {
        "lower": b_corr * center,
        "upper": a_corr * center,
        "A": a_corr,
        "B": b_corr,
    }


# ---------------------------------------------------------------------------
# log-space path (large m)


def log_expected_Zk(params: Params, k) -> mpmath.mpf:
    """ln E[Z_k] via log-gamma at 80-bit precision; -inf when E[Z_k] = 0."""
    k = _as_int(k, "k")
    if k < 0:
        raise RangeError(f"k={k} must be >= 0")
    if k > params.max_matching_size:
        return mpmath.mpf("-inf")
    m, d, lm, nv = params.m, params.d, params.half_edges, params.n_vertices
    lk = params.l * k
    with mpmath.workprec(_LOG_PREC_BITS):
        lg = mpmath.loggamma
        return (
            lg(m + 1)
            - lg(k + 1)
            - lg(m - k + 1)
            + lg(lm - lk + 1)
            + lk * mpmath.log(d)
            + lg(nv + 1)
            - lg(lm + 1)
            - lg(nv - lk + 1)
        )


def expected_Zk_float(params: Params, k) -> float:
    """E[Z_k] as a float via the log path (usable when the value overflows)."""
    with mpmath.workprec(_LOG_PREC_BITS):
        return float(mpmath.exp(log_expected_Zk(params, k)))


def expected_Zk_real(params: Params, k: float) -> float:
    """E[Z_k] continued to real k through the Gamma function.

    The factorials of the exact formula are replaced by Gamma(x+1); at
    integer k this agrees with expected_Zk.  Used to evaluate expected
    counts at real-valued size landmarks such as K_m.
    """
    if not 0 <= k <= params.max_matching_size:
        raise RangeError(f"k={k} outside [0, m/d] = [0, {params.max_matching_size}]")
    m, d, lm, nv = params.m, params.d, params.half_edges, params.n_vertices
    lk = params.l * k
    with mpmath.workprec(_LOG_PREC_BITS):
        lg = mpmath.loggamma
        kk = mpmath.mpf(k)
        lkk = mpmath.mpf(lk)
        ln = (
            lg(m + 1)
            - lg(kk + 1)
            - lg(m - kk + 1)
            + lg(lm - lkk + 1)
            + lkk * mpmath.log(d)
            + lg(nv + 1)
            - lg(lm + 1)
            - lg(nv - lkk + 1)
        )
        return float(mpmath.exp(ln))


def maximal_matching_report(params: Params) -> dict:
    """Maximal-matching location report: K_m, prefactor, and E[Z] nearby.

    K_m is real-valued; EZ_at_Km evaluates the Gamma-continued moment at
    the real index (the quantity whose limit is the prefactor), while the
    floor/ceil entries give the exact integer-size moments on either side.
    """
    d, l, m = params.d, params.l, params.m
    info = analytic.maximal_matching_asymptotics(d, l, m)
    km = info["K_m"]
    return {
        **info,
        "EZ_at_Km": expected_Zk_real(params, km),
        "EZ_floor": expected_Zk_float(params, math.floor(km)),
        "EZ_ceil": expected_Zk_float(params, math.ceil(km)),
    }


def log_expected_Z(params: Params, window: float | None = None) -> mpmath.mpf:
    """ln E[Z] by log-sum-exp over sizes.

    With `window` set, the sum is restricted to |k - m*beta_star| <=
    window*sqrt(m); the omitted tail is geometrically negligible once the
    window spans several standard deviations.
    """
    m, d, l = params.m, params.d, params.l
    k_max = params.max_matching_size
    lo, hi = 0, k_max
    if window is not None:
        bs = analytic.beta_star(d, l)
        half = window * math.sqrt(m)
        lo = max(0, math.floor(m * bs - half))
        hi = min(k_max, math.ceil(m * bs + half))
    with mpmath.workprec(_LOG_PREC_BITS):
        logs = [log_expected_Zk(params, k) for k in range(lo, hi + 1)]
        peak = max(logs)
        return peak + mpmath.log(mpmath.fsum(mpmath.exp(x - peak) for x in logs))


def normalized_first_moment(params: Params, window: float | None = None) -> float:
    """e^(-m*phi(beta_star)) E[Z]; tends to the first-moment prefactor."""
    d, l, m = params.d, params.l, params.m
    bs = analytic.beta_star(d, l)
    with mpmath.workprec(_LOG_PREC_BITS):
        ln_ez = log_expected_Z(params, window)
        return float(mpmath.exp(ln_ez - m * mpmath.mpf(analytic.phi(d, l, bs))))


def tail_expectation(params: Params, C) -> float:
    """E[number of matchings of size >= ceil(K_m + C)] in log-space.

    Requires the maximal-matching regime (f_at_1_over_d < 0); decreasing
    in C since the rate function falls beyond its zero.
    """
    C = _as_int(C, "C")
    if C < 1:
        raise RangeError(f"C={C} must be >= 1")
    d, l, m = params.d, params.l, params.m
    if analytic.f_at_1_over_d(d, l) >= 0:
        raise NoRootError(f"no maximal-matching regime for (d,l)=({d},{l})")
    info = analytic.maximal_matching_asymptotics(d, l, m)
    start = math.ceil(info["K_m"] + C)
    if start > params.max_matching_size:
        return 0.0
    with mpmath.workprec(_LOG_PREC_BITS):
        return float(
            mpmath.fsum(
                mpmath.exp(log_expected_Zk(params, k))
                for k in range(start, params.max_matching_size + 1)
            )
        )
