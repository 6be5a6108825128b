"""Closed-form analysis of the matching ensemble.

Everything here is a pure function of (d, l) and real arguments: the
exponential growth rate of the expected matching count and its optimizers,
the two-matching overlap exponent with gradient/Hessian and curve analysis,
replica-symmetry condition checkers, cycle-statistic limits, and
maximal-matching asymptotics.

Conventions: beta is the matching density (edges per hyperedge count m),
restricted to the open interval (0, 1/d); rho and theta are the overlap
coordinates (shared-edge density and cross-touch density), with
eta = theta / l.  Root-finding is bisection on guaranteed sign changes;
boundary evaluations raise DomainError rather than extrapolate, with an
interior margin of 1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConvergenceError, DomainError, NoRootError, PoleError

_MARGIN = 1e-12


def _check_dl(d: int, l: int) -> None:
    if d < 2 or l < 2:
        raise DomainError(f"need d >= 2 and l >= 2, got d={d}, l={l}")


def _check_beta(d: int, beta: float) -> None:
    if not _MARGIN <= beta <= 1.0 / d - _MARGIN:
        raise DomainError(f"beta={beta} outside the open interval (0, 1/{d})")


def _bisect(f, lo: float, hi: float, tol: float = 1e-15, max_iter: int = 200) -> float:
    """Bisection on a bracketing interval; f(lo) and f(hi) must differ in sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ConvergenceError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0 or hi - lo < tol:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# single-matching rate function


def phi(d: int, l: int, beta: float) -> float:
    """Exponential growth rate of the expected count of density-beta matchings."""
    _check_dl(d, l)
    _check_beta(d, beta)
    return (
        -beta * math.log(beta)
        + (l - 1) * (1 - beta) * math.log(1 - beta)
        - (l / d) * (1 - d * beta) * math.log(1 - d * beta)
    )


def phi_prime(d: int, l: int, beta: float) -> float:
    _check_dl(d, l)
    _check_beta(d, beta)
    return (
        -math.log(beta)
        - (l - 1) * math.log(1 - beta)
        + l * math.log(1 - d * beta)
    )


def phi_double_prime(d: int, l: int, beta: float) -> float:
    _check_dl(d, l)
    _check_beta(d, beta)
    return -1.0 / beta - (l * d - d * beta - (l - 1)) / ((1 - beta) * (1 - d * beta))


def phi_family(d: int, l: int, beta: float) -> tuple[float, float, float]:
    """(value, first, second derivative); the second is negative on (0, 1/d)."""
    return phi(d, l, beta), phi_prime(d, l, beta), phi_double_prime(d, l, beta)


def optimizer_residual(d: int, l: int, beta: float) -> float:
    """(1 - d*beta)^l - beta*(1 - beta)^(l-1); zero exactly at beta_star."""
    return (1 - d * beta) ** l - beta * (1 - beta) ** (l - 1)


def beta_star(d: int, l: int) -> float:
    """The unique critical density in (0, 1/d) where phi' vanishes."""
    _check_dl(d, l)
    lo, hi = _MARGIN, 1.0 / d - _MARGIN
    return _bisect(lambda b: phi_prime(d, l, b), lo, hi)


def f_at_1_over_d(d: int, l: int) -> float:
    """Boundary value lim_{beta -> 1/d} phi; its sign decides whether phi has a zero."""
    _check_dl(d, l)
    return ((l - 1) * (d - 1) / d) * math.log((d - 1) / d) - (1 / d) * math.log(1 / d)


def beta_zero(d: int, l: int) -> float:
    """Root of phi in (beta_star, 1/d); exists iff f_at_1_over_d < 0."""
    if f_at_1_over_d(d, l) >= 0:
        raise NoRootError(
            f"phi has no zero in (beta_star, 1/{d}) for (d,l)=({d},{l}): boundary value >= 0"
        )
    bs = beta_star(d, l)
    return _bisect(lambda b: phi(d, l, b), bs, 1.0 / d - _MARGIN)


def level_l1(d: int, l: int) -> float:
    return min(1.0 / (d * l - d - l + 2), 1.0 / (math.sqrt((d - 1) * (l - 1)) + 1))


def level_l2(d: int, l: int) -> float:
    return min(
        (1.0 / d) * (1 - math.sqrt((d - 1) / (d ** (l / (l - 1)) - 1))),
        (d * l + l * l - 2 * l - d + 1) / (2 * d * l * l - d * l),
        1.0 / (math.sqrt((d - 1) * (l - 1)) + 1),
    )


def thresholds(d: int, l: int) -> dict:
    """All scalar thresholds of the (d, l) ensemble in one report.

    beta0 is present only when the boundary value f_at_1_over_d is negative;
    the prefactor is the limit of e^(-m*phi(beta_star)) E[Z].
    """
    _check_dl(d, l)
    bs = beta_star(d, l)
    f = f_at_1_over_d(d, l)
    out = {
        "beta_star": bs,
        "f_at_1_over_d": f,
        "beta0": beta_zero(d, l) if f < 0 else None,
        "L1": level_l1(d, l),
        "L2": level_l2(d, l),
        "free_energy_limit": phi(d, l, bs),
        "first_moment_prefactor": math.sqrt((1 - bs) / (1 + (l * d - d - l) * bs)),
    }
    return out


def weighted_optimum(d: int, l: int, x: float) -> dict:
    """Maximizer of phi(beta) + beta*ln(x) and the weighted free-energy limit."""
    _check_dl(d, l)
    if x <= 0:
        raise DomainError(f"weight x must be positive, got {x}")
    lnx = math.log(x)
    bsx = _bisect(lambda b: phi_prime(d, l, b) + lnx, _MARGIN, 1.0 / d - _MARGIN)
    return {
        "beta_star_x": bsx,
        "weighted_limit": phi(d, l, bsx) + bsx * lnx,
    }


# ---------------------------------------------------------------------------
# two-matching overlap exponent


@dataclass(frozen=True)
class SurfacePoint:
    """Overlap coordinates of a pair of density-beta matchings."""

    beta: float
    rho: float
    theta: float

    @property
    def eta(self) -> float:
        return self.theta  # adjusted below; kept simple via __post_init__-free design

    def eta_value(self, l: int) -> float:
        return self.theta / l


def region_theta_bounds(d: int, l: int, beta: float, rho: float) -> tuple[float, float]:
    """Admissible open theta-interval at given rho (empty if lo >= hi)."""
    return max(0.0, 2 * l * beta - l * rho - l / d), l * (beta - rho)


def in_region(d: int, l: int, beta: float, rho: float, theta: float) -> bool:
    """Strictly interior to the overlap region, with the evaluation margin."""
    if not 0 < rho < beta:
        return False
    eta = theta / l
    u = beta - rho - eta
    v = 1 - 2 * beta * d + rho * d + eta * d
    w = 1 - 2 * beta + rho
    return min(rho, theta, beta - rho, u, v, w) >= _MARGIN


def _psi_parts(d: int, l: int, beta: float, rho: float, theta: float) -> tuple:
    eta = theta / l
    u = beta - rho - eta
    v = 1 - 2 * beta * d + rho * d + eta * d
    w = 1 - 2 * beta + rho
    if min(rho, theta, beta - rho, u, v, w) < _MARGIN:
        raise DomainError(
            f"(rho, theta)=({rho}, {theta}) is not strictly interior to the overlap "
            f"region at beta={beta}"
        )
    return eta, u, v, w


def psi(d: int, l: int, beta: float, rho: float, theta: float) -> float:
    """Exponential growth rate of one overlap term of the second moment."""
    _check_dl(d, l)
    _check_beta(d, beta)
    eta, u, v, w = _psi_parts(d, l, beta, rho, theta)
    return (
        -rho * math.log(rho)
        - theta * math.log(eta)
        + (l - 1) * w * math.log(w)
        + theta * math.log(d - 1)
        + 2 * (l - 1) * (beta - rho) * math.log(beta - rho)
        - 2 * l * u * math.log(u)
        - (l / d) * v * math.log(v)
    )


def psi_grad(d: int, l: int, beta: float, rho: float, theta: float) -> tuple[float, float]:
    eta, u, v, w = _psi_parts(d, l, beta, rho, theta)
    d_rho = (
        -math.log(rho)
        + (l - 1) * math.log(w)
        - 2 * (l - 1) * math.log(beta - rho)
        + 2 * l * math.log(u)
        - l * math.log(v)
    )
    d_theta = -math.log(eta) + 2 * math.log(u) - math.log(v) + math.log(d - 1)
    return d_rho, d_theta


def psi_hessian(
    d: int, l: int, beta: float, rho: float, theta: float
) -> tuple[float, float, float]:
    """(d2/drho2, d2/dtheta2, mixed); the theta-theta entry is always negative."""
    eta, u, v, w = _psi_parts(d, l, beta, rho, theta)
    h_rr = (
        -1 / rho
        + (l - 1) / w
        + 2 * (l - 1) / (beta - rho)
        - 2 * l / u
        - l * d / v
    )
    h_tt = -1 / theta - (2 / l) / u - (d / l) / v
    h_rt = -2 / u - d / v
    return h_rr, h_tt, h_rt


def psi_family(p: SurfacePoint, d: int, l: int) -> dict:
    """Value, gradient, Hessian and its determinant at one overlap point."""
    beta, rho, theta = p.beta, p.rho, p.theta
    value = psi(d, l, beta, rho, theta)
    grad = psi_grad(d, l, beta, rho, theta)
    h_rr, h_tt, h_rt = psi_hessian(d, l, beta, rho, theta)
    return {
        "psi": value,
        "grad": grad,
        "hessian": ((h_rr, h_rt), (h_rt, h_tt)),
        "det": h_rr * h_tt - h_rt * h_rt,
    }


def product_point(d: int, l: int, beta: float) -> tuple[float, float]:
    """The independent-pair overlap point (rho, theta) = (beta^2, l(d-1)beta^2)."""
    return beta * beta, l * (d - 1) * beta * beta


def special_point_hessian_det(d: int, l: int, beta: float) -> float:
    """Closed-form Hessian determinant at the product point."""
    _check_dl(d, l)
    _check_beta(d, beta)
    num = beta**2 * d - 2 * beta + beta**2 * l - beta**2 * d * l + 1
    den = l * beta**4 * (beta * d - 1) ** 2 * (beta - 1) ** 2 * (d - 1)
    return num / den


def dpsi_drho_on_floor(d: int, l: int, beta: float, rho: float) -> float:
    """rho-derivative of the overlap exponent on the theta = 0 edge.

    Finite there (unlike the theta-derivative); used by the global-maximum
    criterion that inspects the segment ending at (d*beta^2, 0).
    """
    _check_dl(d, l)
    _check_beta(d, beta)
    if not _MARGIN <= rho <= beta - _MARGIN:
        raise DomainError(f"rho={rho} outside (0, beta) at beta={beta}")
    v = 1 - 2 * beta * d + rho * d
    w = 1 - 2 * beta + rho
    if v < _MARGIN:
        raise DomainError("theta=0 edge point lies outside the admissible region")
    return (
        -math.log(rho)
        + (l - 1) * math.log(w)
        + 2 * math.log(beta - rho)
        - l * math.log(v)
    )


# ---------------------------------------------------------------------------
# the det H = 0 curve


def curve_d(d: int, l: int, beta: float, rho: float) -> float:
    """Quadratic whose unique zero in (0, beta) is the pole rho_1 of the curve."""
    return (
        (d * l - l - d) * rho**2
        + (3 * beta * l - beta * d - 2 * l + 2 * beta**2 * d + beta * d * l - 2 * beta**2 * d * l + 1) * rho
        - 2 * beta**2
        + beta
    )


def curve_j(d: int, l: int, beta: float, rho: float) -> float:
    """Numerator quadratic of the curve: xi = (beta - rho) J / D."""
    return (
        (d * l - l - d) * rho**2
        + (beta * d + beta * l + 2 * beta**2 * d - beta * d * l - 1) * rho
        + 2 * beta**2 * d
        - beta
        - 4 * beta**3 * d
        + 2 * beta**2
    )


def curve_f(d: int, l: int, beta: float, rho: float) -> float:
    """Numerator of xi'(rho) + 1 (times D^2); its positive zero is rho_3."""
    return (
        2
        * (beta * d - 1) ** 2
        * (l - 1)
        * (
            (2 * l * (1 - beta) ** 2 - 1) * rho**2
            - 2 * beta * (1 - 2 * beta) * rho
            - beta**2 * (1 - 2 * beta) ** 2
        )
    )


def rho_3(l: int, beta: float) -> float:
    return beta * (1 - 2 * beta) / (math.sqrt(2 * l) * (1 - beta) - 1)


def rho_5(l: int, beta: float) -> float:
    return beta * (1 - 2 * beta) / (l * (1 - beta) - 1)


def critical_curve(d: int, l: int, beta: float, rho: float) -> dict:
    """The det H = 0 curve in eta = theta/l coordinates, with its landmark roots.

    xi(rho) is the eta-height of the curve; D its pole denominator; J the
    matching numerator; F controls the slope.  rho_1 is the pole location,
    rho_2 (present only for 1/2 < beta*d < 1) the zero of J below 2*beta-1/d,
    rho_3 the slope landmark, rho_5 the crossing with eta = beta - rho.
    """
    _check_dl(d, l)
    _check_beta(d, beta)
    if not _MARGIN <= rho <= beta - _MARGIN:
        raise DomainError(f"rho={rho} outside (0, beta) at beta={beta}")
    dval = curve_d(d, l, beta, rho)
    rho1 = _bisect(lambda r: curve_d(d, l, beta, r), _MARGIN, beta - _MARGIN)
    if abs(rho - rho1) < 1e-11 or dval == 0.0:
        raise PoleError(f"rho={rho} sits on the pole rho_1={rho1} of the curve")
    jval = curve_j(d, l, beta, rho)
    fval = curve_f(d, l, beta, rho)
    xi = (beta - rho) * (
        1
        - 2
        * (1 - beta * d)
        * (beta + rho - 2 * beta**2 - rho * l * (1 - beta))
        / dval
    )
    roots: dict = {
        "rho1": rho1,
        "rho3": rho_3(l, beta),
        "rho5": rho_5(l, beta),
    }
    if 0.5 < beta * d < 1.0:
        hi = 2 * beta - 1.0 / d
        roots["rho2"] = _bisect(lambda r: curve_j(d, l, beta, r), 0.0, hi)
    return {"xi": xi, "D": dval, "J": jval, "F": fval, "roots": roots}


# ---------------------------------------------------------------------------
# boundary restriction theta = l(beta - rho)


def boundary_restriction(d: int, l: int, beta: float, rho: float) -> dict:
    """The overlap exponent restricted to the disjoint-support boundary line."""
    _check_dl(d, l)
    _check_beta(d, beta)
    if not _MARGIN <= rho <= beta - _MARGIN:
        raise DomainError(f"rho={rho} outside (0, beta) at beta={beta}")
    w = 1 - 2 * beta + rho
    br = beta - rho
    t = (
        -rho * math.log(rho)
        + (l - 1) * w * math.log(w)
        + l * br * math.log(d - 1)
        + (l - 2) * br * math.log(br)
        - (l / d) * (1 - beta * d) * math.log(1 - beta * d)
    )
    t_prime = (
        -math.log(rho)
        + (l - 1) * math.log(w)
        - l * math.log(d - 1)
        - (l - 2) * math.log(br)
    )
    t_double = -1 / rho + (l - 1) / w + (l - 2) / br
    return {"T": t, "T_prime": t_prime, "T_double_prime": t_double}


# ---------------------------------------------------------------------------
# replica-symmetry condition report


@dataclass(frozen=True)
class Condition:
    """One named criterion with its numeric sides (satisfied iff lhs <= rhs)."""

    name: str
    satisfied: bool
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class ConditionReport:
    """Every named replica-symmetry criterion plus the theorem-level verdict.

    Density-dependent criteria are evaluated at the optimizer beta_star
    (or beta_star(x) when a weight is given), recorded in `beta`.
    """

    d: int
    l: int
    x: float | None
    beta: float
    verdict: bool
    conditions: dict[str, Condition] = field(repr=False)

    def __getitem__(self, name: str) -> Condition:
        return self.conditions[name]


def _phi_prime_at_level(d: int, l: int, level: float, shift: float = 0.0) -> tuple[float, bool]:
    """phi'(level) + shift with the convention phi'(1/d-) = -inf."""
    if level >= 1.0 / d - _MARGIN:
        return -math.inf, True
    val = phi_prime(d, l, level) + shift
    return val, val <= 0.0


def replica_symmetry_check(d: int, l: int, x: float | None = None) -> ConditionReport:
    """Evaluate every named replica-symmetry criterion with numeric slack.

    The verdict is the disjunction backing the free-energy convergence: for
    the unweighted count, size two or a non-positive rate slope at level L1;
    for weight x, the same with ln(x) added (or the L2 variant).  The level
    conditions are evaluated numerically for every d >= 2: the quoted
    example list includes d = 2 pairs, so no d >= 3 gate is applied.
    """
    _check_dl(d, l)
    if x is not None and x <= 0:
        raise DomainError(f"weight x must be positive, got {x}")
    l1 = level_l1(d, l)
    l2 = level_l2(d, l)
    lnx = 0.0 if x is None else math.log(x)
    beta = beta_star(d, l) if x is None else weighted_optimum(d, l, x)["beta_star_x"]

    conds: dict[str, Condition] = {}

    def add(name: str, satisfied: bool, lhs: float, rhs: float) -> None:
        conds[name] = Condition(name, satisfied, lhs, rhs)

    add("thm1_2a", l == 2, float(l), 2.0)
    v, ok = _phi_prime_at_level(d, l, l1)
    add("thm1_2b", ok, v, 0.0)
    add("thm1_3a", l == 2, float(l), 2.0)
    v, ok = _phi_prime_at_level(d, l, l1, lnx)
    add("thm1_3b", ok, v, 0.0)
    v, ok = _phi_prime_at_level(d, l, l2, lnx)
    add("thm1_3c", ok, v, 0.0)

    add("lemma_l24_ld", l <= d, float(l), float(d))
    bld = 1.0 / (math.sqrt((d - 1) * (l - 1)) + 1)
    add("lemma_l24_bld", beta < bld, beta, bld)
    bl1 = 1.0 / (d * l - d - l + 2)
    add("bl1", beta <= bl1, beta, bl1)
    bca1 = (d * l + l * l - 2 * l - d + 1) / (2 * d * l * l - d * l)
    add("bca1", beta < bca1, beta, bca1)
    bcf = (
        -(d**2) * l**2 * beta**4
        + 2 * d**2 * l**2 * beta**3
        - d**2 * l * beta**2
        + (-2 * d * l**2 + 2 * d * l) * beta
        + d * l
        - 2 * l
        - d
        + l * l
        + 1
    )
    add("bcf", bcf > 0, 0.0, bcf)
    cpl = dpsi_drho_on_floor(d, l, beta, d * beta * beta)
    add("cpl", cpl <= 0, cpl, 0.0)
    cdbl = (1.0 / d) * (1 - math.sqrt((d - 1) / (d ** (l / (l - 1)) - 1)))
    add("cdbl", beta <= cdbl, beta, cdbl)

    if x is None:
        verdict = conds["thm1_2a"].satisfied or conds["thm1_2b"].satisfied
    else:
        verdict = (
            conds["thm1_3a"].satisfied
            or conds["thm1_3b"].satisfied
            or conds["thm1_3c"].satisfied
        )
    return ConditionReport(d=d, l=l, x=x, beta=beta, verdict=verdict, conditions=conds)


# ---------------------------------------------------------------------------
# cycle statistics and tails


def lambda_k(d: int, l: int, k: int) -> float:
    """Unconditional limit mean of the k-cycle count."""
    if k <= 64:
        return ((d - 1) * (l - 1)) ** k / (2 * k)
    return math.exp(k * math.log((d - 1) * (l - 1)) - math.log(2 * k))


def mu_k(d: int, l: int, beta: float, k: int) -> float:
    """Limit mean of the k-cycle count conditioned on a density-beta matching."""
    return lambda_k(d, l, k) * (1 + (-1) ** k * beta**k / (1 - beta) ** k)


def cycle_limits(d: int, l: int, beta: float, k: int) -> dict:
    """Cycle-statistic limits plus the second-moment ratio and tail constants.

    The ratio radicand must be positive; the B series converges only below
    the density 1/(sqrt((d-1)(l-1)) + 1) and is truncated once its geometric
    tail majorant drops below 1e-12.
    """
    _check_dl(d, l)
    _check_beta(d, beta)
    if k < 1:
        raise DomainError(f"cycle length k must be >= 1, got {k}")
    radicand = beta**2 * (d + l - d * l) - 2 * beta + 1
    if radicand <= 0:
        raise DomainError(
            f"second-moment ratio undefined: radicand {radicand} <= 0 at beta={beta}"
        )
    ratio = (1 - beta) / math.sqrt(radicand)
    exp_minus_a = (radicand / (1 - beta) ** 2) ** 0.25

    growth = math.sqrt((d - 1) * (l - 1)) * beta / (1 - beta)
    if growth >= 1:
        raise DomainError(
            f"B series diverges at beta={beta}: needs beta < 1/(sqrt((d-1)(l-1))+1)"
        )
    b_sum = 0.0
    j = 1
    q = beta / (1 - beta)
    log_base = math.log((d - 1) * (l - 1))
    while True:
        # sqrt(lambda_j) / ((1/q)^j - 1) in log space to survive large j
        log_term = (
            0.5 * (j * log_base - math.log(2 * j))
            + j * math.log(q)
            - math.log1p(-(q**j))
        )
        b_sum += math.exp(log_term)
        # remaining terms are bounded by growth^i / (1 - q) each
        tail = growth ** (j + 1) / ((1 - growth) * (1 - q))
        if tail < 1e-12 and j >= k:
            break
        j += 1
        if j > 100_000:
            raise ConvergenceError("B series failed to meet its tail target")
    return {
        "lambda_k": lambda_k(d, l, k),
        "mu_k": mu_k(d, l, beta, k),
        "second_moment_ratio": ratio,
        "exp_minus_A": exp_minus_a,
        "B": b_sum,
    }


def ratio_limit_hypotheses(d: int, l: int, beta: float) -> bool:
    """Whether the second-moment ratio limit is backed by the proved regime.

    Size two always qualifies; otherwise the density must sit at or below
    1/(dl - d - l + 2) and the product-point exponent must be positive.
    """
    _check_dl(d, l)
    _check_beta(d, beta)
    rho, theta = product_point(d, l, beta)
    positive = psi(d, l, beta, rho, theta) > 0
    if l == 2:
        return positive
    return positive and beta <= 1.0 / (d * l - d - l + 2)


def maximal_matching_asymptotics(d: int, l: int, m: int) -> dict:
    """Location and scale of the maximal-matching size distribution.

    Requires the boundary value f_at_1_over_d to be negative, so the rate
    function has a zero beta0 past its maximizer; K_m sits ln(m)-below
    m*beta0 and the expected count there tends to the reported prefactor.
    """
    _check_dl(d, l)
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    b0 = beta_zero(d, l)  # raises NoRootError when f >= 0
    slope = phi_prime(d, l, b0)
    k_m = m * b0 + math.log(m) / (2 * slope)
    return {
        "beta0": b0,
        "K_m": k_m,
        "prefactor": 1.0 / math.sqrt(2 * math.pi * b0 * (1 - d * b0)),
    }


def poisson_tail_bounds(mu: float, epsilon: float) -> dict:
    """Chernoff-style tail bounds for a Poisson(mu) variable at relative offset epsilon."""
    if mu <= 0:
        raise DomainError(f"mu must be positive, got {mu}")
    if epsilon < 0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon}")
    lower = math.exp(-mu * epsilon**2 / 2)
    upper = (math.exp(epsilon) * (1 + epsilon) ** (-(1 + epsilon))) ** mu
    return {"lower_tail": lower, "upper_tail": upper}
