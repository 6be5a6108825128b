import math

import pytest

from hypermatch import analytic as an
from hypermatch.errors import DomainError, NoRootError, PoleError

PAIRS = [(2, 2), (3, 2), (2, 3), (3, 3), (4, 3)]


def interior_grid(d, l, beta, n=10, shrink=1e-3):
    """n x n points strictly inside the overlap region at fixed beta."""
    pts = []
    for i in range(n):
        rho = beta * (i + 0.5) / n
        lo, hi = an.region_theta_bounds(d, l, beta, rho)
        lo, hi = lo + shrink * (hi - lo), hi - shrink * (hi - lo)
        if hi <= lo:
            continue
        for j in range(n):
            theta = lo + (hi - lo) * (j + 0.5) / n
            if an.in_region(d, l, beta, rho, theta):
                pts.append((rho, theta))
    return pts


def test_phi_value_and_limits():
    assert an.phi(2, 2, 0.25) == pytest.approx(0.4773856262211096, abs=1e-12)
    # phi -> 0 at the left edge
    assert abs(an.phi(2, 2, 1e-9)) < 1e-7
    with pytest.raises(DomainError):
        an.phi(2, 2, 0.5)
    with pytest.raises(DomainError):
        an.phi(2, 2, -0.1)


def test_phi_double_prime_negative():
    for d, l in PAIRS:
        for i in range(1, 20):
            assert an.phi_double_prime(d, l, i / (20 * d)) < 0


def test_beta_star_2_2_closed_form():
    assert an.beta_star(2, 2) == pytest.approx((5 - math.sqrt(5)) / 10, abs=1e-12)


def test_beta_star_residual_all_pairs():
    for d in range(2, 7):
        for l in range(2, 7):
            bs = an.beta_star(d, l)
            assert abs(an.optimizer_residual(d, l, bs)) < 1e-12
            assert abs(an.phi_prime(d, l, bs)) < 1e-10


def test_thresholds_2_2():
    th = an.thresholds(2, 2)
    assert th["f_at_1_over_d"] == pytest.approx(0.0, abs=1e-15)  # boundary case
    assert th["beta0"] is None
    assert th["first_moment_prefactor"] == pytest.approx(0.8506508083520398, abs=1e-9)


def test_thresholds_3_3():
    th = an.thresholds(3, 3)
    assert th["L1"] == pytest.approx(0.2, abs=1e-15)
    assert an.phi_prime(3, 3, th["L1"]) == pytest.approx(-0.6931471805599453, abs=1e-9)
    assert th["f_at_1_over_d"] == pytest.approx(-0.174416, abs=1e-6)
    assert th["beta0"] is not None and th["beta_star"] < th["beta0"] < 1 / 3
    assert an.phi(3, 3, th["beta0"]) == pytest.approx(0.0, abs=1e-12)


def test_weighted_optimum():
    th = an.thresholds(2, 2)
    wo = an.weighted_optimum(2, 2, 1.0)
    assert wo["beta_star_x"] == pytest.approx(th["beta_star"], abs=1e-12)
    assert wo["weighted_limit"] == pytest.approx(th["free_energy_limit"], abs=1e-12)
    prev = 1.0
    for e in range(1, 7):
        b = an.weighted_optimum(2, 2, 10.0**-e)["beta_star_x"]
        assert b < prev
        prev = b
    # stationarity residual
    for x in (0.5, 1.0, 2.0):
        b = an.weighted_optimum(3, 3, x)["beta_star_x"]
        assert abs(an.phi_prime(3, 3, b) + math.log(x)) < 1e-10


def test_psi_gradient_zero_and_value_at_product_point():
    for d, l in PAIRS:
        for i in range(1, 6):
            beta = i / (6 * d)
            rho, theta = an.product_point(d, l, beta)
            g = an.psi_grad(d, l, beta, rho, theta)
            assert abs(g[0]) < 1e-10 and abs(g[1]) < 1e-10
            assert an.psi(d, l, beta, rho, theta) == pytest.approx(
                2 * an.phi(d, l, beta), abs=1e-10
            )


def test_psi_gradient_matches_finite_differences():
    h = 1e-6
    for d, l in PAIRS:
        beta = 0.5 / d
        for rho, theta in interior_grid(d, l, beta):
            g = an.psi_grad(d, l, beta, rho, theta)
            fd_r = (an.psi(d, l, beta, rho + h, theta) - an.psi(d, l, beta, rho - h, theta)) / (2 * h)
            fd_t = (an.psi(d, l, beta, rho, theta + h) - an.psi(d, l, beta, rho, theta - h)) / (2 * h)
            assert abs(g[0] - fd_r) <= 1e-5 * max(1.0, abs(g[0])), (d, l, rho, theta)
            assert abs(g[1] - fd_t) <= 1e-5 * max(1.0, abs(g[1])), (d, l, rho, theta)


def test_psi_hessian_matches_finite_differences():
    h = 1e-6
    for d, l in PAIRS:
        beta = 0.5 / d
        for rho, theta in interior_grid(d, l, beta):
            h_rr, h_tt, h_rt = an.psi_hessian(d, l, beta, rho, theta)
            gr = lambda r, t: an.psi_grad(d, l, beta, r, t)
            fd_rr = (gr(rho + h, theta)[0] - gr(rho - h, theta)[0]) / (2 * h)
            fd_tt = (gr(rho, theta + h)[1] - gr(rho, theta - h)[1]) / (2 * h)
            fd_rt = (gr(rho, theta + h)[0] - gr(rho, theta - h)[0]) / (2 * h)
            assert abs(h_rr - fd_rr) <= 1e-4 * max(1.0, abs(h_rr))
            assert abs(h_tt - fd_tt) <= 1e-4 * max(1.0, abs(h_tt))
            assert abs(h_rt - fd_rt) <= 1e-4 * max(1.0, abs(h_rt))
            assert h_tt < 0  # unconditional sign


def test_hessian_negative_definite_for_size_two():
    for d in (2, 3, 4):
        l = 2
        for i in range(1, 5):
            beta = i / (5 * d)
            for rho, theta in interior_grid(d, l, beta, n=6):
                h_rr, h_tt, h_rt = an.psi_hessian(d, l, beta, rho, theta)
                assert h_rr < 0 and h_rr * h_tt - h_rt * h_rt > 0, (d, beta, rho, theta)


def test_special_point_det_example_and_consistency():
    assert an.special_point_hessian_det(2, 2, 0.25) == pytest.approx(
        455.1111111111111, rel=1e-12
    )
    for d, l in PAIRS:
        for i in range(1, 5):
            beta = i / (5 * d)
            rho, theta = an.product_point(d, l, beta)
            fam = an.psi_family(an.SurfacePoint(beta, rho, theta), d, l)
            assert fam["det"] == pytest.approx(
                an.special_point_hessian_det(d, l, beta), rel=1e-8
            )


def test_special_point_det_sign_criterion():
    for d, l in PAIRS:
        for i in range(1, 10):
            beta = i / (10 * d)
            g = beta**2 * (d + l - d * l) - 2 * beta + 1
            det = an.special_point_hessian_det(d, l, beta)
            assert (det > 0) == (g > 0)


def test_critical_curve_landmarks():
    cc = an.critical_curve(2, 3, 0.2, 0.05)
    assert cc["roots"]["rho5"] == pytest.approx(0.12 / 1.4, abs=1e-10)
    assert cc["roots"]["rho3"] == pytest.approx(0.12 / (math.sqrt(6) * 0.8 - 1), abs=1e-6)
    # root identities
    r = cc["roots"]
    assert abs(an.curve_d(2, 3, 0.2, r["rho1"])) < 1e-10
    assert abs(an.curve_f(2, 3, 0.2, r["rho3"])) < 1e-10
    # xi crosses eta = beta - rho exactly at rho5
    cc5 = an.critical_curve(2, 3, 0.2, r["rho5"])
    assert cc5["xi"] == pytest.approx(0.2 - r["rho5"], abs=1e-10)


def test_critical_curve_rho2_when_beta_d_large():
    # beta*d = 0.6 in (1/2, 1)
    cc = an.critical_curve(2, 3, 0.3, 0.05)
    rho2 = cc["roots"]["rho2"]
    assert 0 < rho2 < 2 * 0.3 - 0.5
    assert abs(an.curve_j(2, 3, 0.3, rho2)) < 1e-10
    # no rho2 below the threshold
    assert "rho2" not in an.critical_curve(2, 3, 0.2, 0.05)["roots"]


def test_critical_curve_pole():
    r1 = an.critical_curve(2, 3, 0.2, 0.05)["roots"]["rho1"]
    with pytest.raises(PoleError):
        an.critical_curve(2, 3, 0.2, r1)


def test_xi_slope_increasing_past_rho5():
    # slope of the curve strictly increasing on (rho5, beta), by finite differences
    d, l, beta = 2, 3, 0.2
    r = an.critical_curve(d, l, beta, 0.05)["roots"]
    lo, hi = r["rho5"], beta
    xs = [lo + (hi - lo) * (i + 0.5) / 12 for i in range(12)]
    h = 1e-7

    def slope(rho):
        a = an.critical_curve(d, l, beta, rho - h)["xi"]
        b = an.critical_curve(d, l, beta, rho + h)["xi"]
        return (b - a) / (2 * h)

    slopes = [slope(x) for x in xs]
    assert all(s2 > s1 for s1, s2 in zip(slopes, slopes[1:]))


def test_boundary_restriction():
    d, l, beta = 3, 3, 0.1
    out = an.boundary_restriction(d, l, beta, 0.05)
    theta = l * (beta - 0.05) * (1 - 1e-10)
    assert out["T"] == pytest.approx(an.psi(d, l, beta, 0.05, theta), abs=1e-8)
    near = an.boundary_restriction(d, l, beta, beta - 1e-8)
    assert near["T"] == pytest.approx(an.phi(d, l, beta), abs=1e-5)
    # curvature vanishes exactly at rho5 and is positive beyond
    rho5 = an.rho_5(l, beta)
    assert an.boundary_restriction(d, l, beta, rho5)["T_double_prime"] == pytest.approx(
        0.0, abs=1e-9
    )
    assert an.boundary_restriction(d, l, beta, (rho5 + beta) / 2)["T_double_prime"] > 0


def test_replica_symmetry_example_list():
    for d, l in [(2, 3), (2, 4), (2, 5), (3, 3), (4, 3)]:
        rep = an.replica_symmetry_check(d, l)
        assert rep.verdict
        assert rep["thm1_2b"].satisfied and rep["thm1_2b"].lhs < 0
    for d in range(2, 7):
        rep = an.replica_symmetry_check(d, 2)
        assert rep.verdict and rep["thm1_2a"].satisfied


def test_replica_symmetry_weighted():
    rep = an.replica_symmetry_check(3, 3, x=0.5)
    assert rep.verdict and rep.x == 0.5
    # small x forces the weighted optimizer below every level
    rep_small = an.replica_symmetry_check(4, 4, x=1e-4)
    assert rep_small.verdict and rep_small["thm1_3b"].satisfied


def test_condition_report_slack_reproducible():
    rep = an.replica_symmetry_check(3, 3)
    for cond in rep.conditions.values():
        assert cond.satisfied == (cond.lhs <= cond.rhs)


def test_cycle_limits_values():
    cl = an.cycle_limits(2, 2, 0.25, 1)
    assert cl["lambda_k"] == pytest.approx(0.5)
    assert cl["mu_k"] == pytest.approx(1 / 3, abs=1e-12)
    assert cl["second_moment_ratio"] == pytest.approx(0.75 / math.sqrt(0.5), abs=1e-9)
    assert cl["exp_minus_A"] == pytest.approx((0.5 / 0.75**2) ** 0.25, abs=1e-12)
    assert cl["B"] > 0
    # slow-but-convergent series close to its radius
    assert an.cycle_limits(4, 4, 0.24, 1)["B"] > 0
    with pytest.raises(DomainError):
        an.cycle_limits(2, 5, 0.4, 1)  # B series diverges past 1/3


def test_maximal_matching_asymptotics():
    info = an.maximal_matching_asymptotics(3, 3, 900)
    assert info["K_m"] < 900 * info["beta0"]
    assert abs(an.phi(3, 3, info["beta0"])) < 1e-12
    with pytest.raises(NoRootError):
        an.maximal_matching_asymptotics(2, 2, 100)  # boundary value is 0


def test_poisson_tail_bounds():
    out = an.poisson_tail_bounds(2, 0.5)
    assert out["lower_tail"] == pytest.approx(math.exp(-0.25), abs=1e-12)
    both_one = an.poisson_tail_bounds(3, 0.0)
    assert both_one["lower_tail"] == 1.0 and both_one["upper_tail"] == 1.0


def test_poisson_tail_bounds_vs_monte_carlo():
    import numpy as np

    rng = np.random.default_rng(5)
    mu, eps = 5.0, 1.0
    draws = rng.poisson(mu, size=10**6)
    emp_low = float(np.mean(draws < mu * (1 - eps)))
    emp_high = float(np.mean(draws > mu * (1 + eps)))
    bounds = an.poisson_tail_bounds(mu, eps)
    assert emp_low <= bounds["lower_tail"]
    assert emp_high <= bounds["upper_tail"]
