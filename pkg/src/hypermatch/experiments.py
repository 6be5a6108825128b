"""Experiment drivers tying the modules together.

Each driver returns a plain dict/list result embedding its full
configuration, so a written file can be replayed exactly.  Trials are
seeded per index (stream i of the base seed); a worker pool only changes
wall time, never output bytes.
"""

from __future__ import annotations

import json
import math
import multiprocessing
from dataclasses import asdict
from fractions import Fraction

import numpy as np
from scipy import stats as sstats

from . import __version__, analytic, moments
from .core import Matching, Params, is_matching, make_params
from .counting import DEFAULT_NODE_BUDGET, count_by_size, cycle_census
from .errors import BudgetExceeded, MismatchError, NonIntegralError
from .sampler import (
    DEFAULT_ENUM_CAP,
    count_configurations,
    enumerate_all,
    prob_fixed_matching,
    sample_conditional_on_matching,
    sample_uniform,
)


def _config(params: Params | None = None, **kw) -> dict:
    cfg = {"version": __version__}
    if params is not None:
        cfg.update(m=params.m, d=params.d, l=params.l)
    cfg.update(kw)
    return cfg


# ---------------------------------------------------------------------------
# brute-force certification


def bruteforce_check(params: Params, b: int = 3, cap: int = DEFAULT_ENUM_CAP) -> dict:
    """Enumerate the whole ensemble and demand exact rational agreement.

    Compares, as exact rationals: ensemble averages of Z_k, Z, Z_k^2 and of
    the conditioned cycle census against the closed-form moments, and the
    conditioned-instance frequency against the fixed-matching probability.
    Raises MismatchError (with the differing pair) on any disagreement.
    """
    kmax = params.max_matching_size
    _, n_instances = count_configurations(params)
    zk_sum = [Fraction(0)] * (kmax + 1)
    zk2_sum = [Fraction(0)] * (kmax + 1)
    cond_count = [0] * (kmax + 1)
    cond_census_sum = [[0] * b for _ in range(kmax + 1)]

    for G in enumerate_all(params, cap=cap):
        zk = count_by_size(G)
        census = cycle_census(G, b).counts
        for k, z in enumerate(zk):
            zk_sum[k] += z
            zk2_sum[k] += z * z
        for km in range(kmax + 1):
            if is_matching(G, range(km)):
                cond_count[km] += 1
                for i in range(b):
                    cond_census_sum[km][i] += census[i]
            else:
                break  # prefix matchings are nested

    comparisons = []

    def compare(name: str, got: Fraction, want: Fraction) -> None:
        comparisons.append(
            {"name": name, "ensemble": str(got), "moment": str(want), "equal": got == want}
        )
        if got != want:
            raise MismatchError(f"{name}: ensemble average {got} != moment {want}")

    for k in range(kmax + 1):
        compare(f"E[Z_{k}]", Fraction(zk_sum[k], n_instances), moments.expected_Zk(params, k))
        compare(
            f"E[Z_{k}^2]", Fraction(zk2_sum[k], n_instances), moments.second_moment(params, k)
        )
    compare("E[Z]", Fraction(sum(zk_sum), n_instances), moments.expected_Z(params))
    for km in range(kmax + 1):
        compare(
            f"P[first {km} edges match]",
            Fraction(cond_count[km], n_instances),
            prob_fixed_matching(params, km),
        )
        for i in range(b):
            compare(
                f"E[C_{i + 1} | {km}-matching]",
                Fraction(cond_census_sum[km][i], cond_count[km]),
                moments.conditional_cycle_expectation(params, km, i + 1),
            )

    return {
        "config": _config(params, b=b, cap=cap),
        "instances": n_instances,
        "comparisons": comparisons,
        "all_equal": True,
    }


# ---------------------------------------------------------------------------
# Poisson goodness of fit


def poisson_chi_square(values: np.ndarray, mean: float, min_expected: float = 5.0) -> dict:
    """Chi-square GOF of integer samples against a fixed Poisson mean.

    Pre-registered binning: walk k upward merging bins until each carries
    expected count >= min_expected; the final bin absorbs the upper tail.
    No parameter is fitted, so dof = bins - 1.
    """
    n = len(values)
    top = int(values.max())
    pmf = sstats.poisson.pmf(np.arange(top + 1), mean)
    observed_raw = np.bincount(values.astype(int), minlength=top + 1).astype(float)
    expected_raw = pmf * n
    # tail mass beyond the largest observed value goes to the last cell
    expected_raw[-1] += n * sstats.poisson.sf(top, mean)

    observed, expected = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(observed_raw, expected_raw):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            observed.append(acc_o)
            expected.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 and observed:
        observed[-1] += acc_o
        expected[-1] += acc_e
    observed_arr = np.array(observed)
    expected_arr = np.array(expected)
    if len(observed_arr) < 2:
        return {"stat": 0.0, "dof": 0, "p_value": 1.0, "bins": len(observed_arr)}
    stat = float(((observed_arr - expected_arr) ** 2 / expected_arr).sum())
    dof = len(observed_arr) - 1
    return {"stat": stat, "dof": dof, "p_value": float(sstats.chi2.sf(stat, dof)), "bins": dof + 1}


def _poisson_trial(args) -> tuple[int, ...]:
    params, b, k, seed, trial = args
    if k is None:
        G = sample_uniform(params, seed, trial)
    else:
        G, _ = sample_conditional_on_matching(params, k, seed, trial)
    return cycle_census(G, b).counts


def _run_trials(worker, arglist, jobs: int):
    if jobs <= 1:
        return [worker(a) for a in arglist]
    with multiprocessing.Pool(jobs) as pool:
        return pool.map(worker, arglist, chunksize=64)


def poisson_stats(
    params: Params,
    b: int,
    trials: int,
    seed: int,
    conditional_k: int | None = None,
    jobs: int = 1,
) -> dict:
    """Sampled cycle-census statistics against their Poisson limits.

    Per cycle length: empirical mean and variance, standard error, the
    limit mean (conditional limit when conditioning), z-score, chi-square
    p-value, and the pairwise empirical correlations.
    """
    arglist = [(params, b, conditional_k, seed, t) for t in range(trials)]
    rows = _run_trials(_poisson_trial, arglist, jobs)
    data = np.array(rows, dtype=np.int64)
    beta = 0.0 if conditional_k is None else conditional_k / params.m

    per_k = []
    for i in range(b):
        k = i + 1
        col = data[:, i]
        target = (
            analytic.lambda_k(params.d, params.l, k)
            if conditional_k is None
            else analytic.mu_k(params.d, params.l, beta, k)
        )
        mean = float(col.mean())
        var = float(col.var(ddof=1))
        se = math.sqrt(var / trials)
        per_k.append(
            {
                "k": k,
                "mean": mean,
                "variance": var,
                "target_mean": target,
                "stderr": se,
                "z": (mean - target) / se if se > 0 else 0.0,
                "var_over_mean": var / mean if mean > 0 else float("nan"),
                "chi_square": poisson_chi_square(col, target),
            }
        )
    corr = np.corrcoef(data, rowvar=False) if b > 1 else np.ones((1, 1))
    return {
        "config": _config(
            params, b=b, trials=trials, seed=seed, conditional_k=conditional_k
        ),
        "per_k": per_k,
        "correlations": [[float(x) for x in row] for row in np.atleast_2d(corr)],
    }


# ---------------------------------------------------------------------------
# free-energy concentration


def _concentration_trial(args):
    params, x, budget, seed, trial = args
    G = sample_uniform(params, seed, trial)
    try:
        coeffs = count_by_size(G, budget)
    except BudgetExceeded:
        return None
    if x is None:
        return math.log(sum(coeffs))
    return math.log(math.fsum(c * x**k for k, c in enumerate(coeffs)))


def concentration(
    d: int,
    l: int,
    m_list: list[int],
    trials: int,
    seed: int,
    x: float | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
) -> dict:
    """Per m: sampled free-energy location and spread versus the limit.

    Reports median and IQR of (1/m) log Z (or log Z(x)) and the absolute
    gap to the limit value; budget-blown instances are recorded and
    skipped.
    """
    if x is None:
        target = analytic.thresholds(d, l)["free_energy_limit"]
    else:
        target = analytic.weighted_optimum(d, l, x)["weighted_limit"]
    rows = []
    for m in m_list:
        params = make_params(m, d, l)
        arglist = [(params, x, node_budget, seed, t) for t in range(trials)]
        raw = _run_trials(_concentration_trial, arglist, jobs)
        vals = np.array([v / m for v in raw if v is not None])
        skipped = sum(1 for v in raw if v is None)
        if vals.size:
            q25, q50, q75 = np.percentile(vals, [25, 50, 75])
        else:
            q25 = q50 = q75 = float("nan")
        rows.append(
            {
                "m": m,
                "trials_used": int(vals.size),
                "skipped": skipped,
                "median": float(q50),
                "iqr": float(q75 - q25),
                "gap": float(abs(q50 - target)),
                "target": target,
            }
        )
    return {
        "config": _config(None, d=d, l=l, m_list=m_list, trials=trials, seed=seed, x=x),
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# exact second-moment ratio scan


def ratio_scan(d: int, l: int, k_over_m: Fraction, m_list: list[int]) -> dict:
    """Exact E[Z_k^2]/E[Z_k]^2 per m against the analytic limit."""
    beta = float(k_over_m)
    limits = analytic.cycle_limits(d, l, beta, 1)
    limit = limits["second_moment_ratio"]
    flagged = analytic.ratio_limit_hypotheses(d, l, beta)
    rows = []
    for m in m_list:
        k = k_over_m * m
        if k.denominator != 1:
            raise NonIntegralError(f"k = m*{k_over_m} = {k} not integral at m={m}")
        params = make_params(m, d, l)
        k = int(k)
        ratio = moments.second_moment(params, k) / moments.expected_Zk(params, k) ** 2
        rows.append(
            {
                "m": m,
                "k": k,
                "ratio": float(ratio),
                "ratio_exact": str(ratio),
                "limit": limit,
                "rel_gap": float(abs(ratio - limit) / limit),
                "hypotheses_ok": flagged,
            }
        )
    return {
        "config": _config(
            None, d=d, l=l, k_over_m=str(k_over_m), m_list=m_list
        ),
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# replica-region scan


def region_scan(
    d_range: tuple[int, int],
    l_range: tuple[int, int],
    x_grid: list[float] | None = None,
) -> dict:
    """Full condition report per (d, l[, x]) over inclusive ranges."""
    rows = []
    xs: list[float | None] = [None] if x_grid is None else list(x_grid)
    for d in range(d_range[0], d_range[1] + 1):
        for l in range(l_range[0], l_range[1] + 1):
            for x in xs:
                rep = analytic.replica_symmetry_check(d, l, x)
                rows.append(
                    {
                        "d": d,
                        "l": l,
                        "x": x,
                        "beta": rep.beta,
                        "verdict": rep.verdict,
                        "conditions": {
                            name: asdict(c) for name, c in rep.conditions.items()
                        },
                    }
                )
    return {
        "config": _config(None, d_range=list(d_range), l_range=list(l_range), x_grid=x_grid),
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# overlap-surface exploration


def _newton_polish(d, l, beta, rho, theta, steps: int = 60):
    """Newton refinement of an interior stationary point of the overlap exponent."""
    for _ in range(steps):
        if not analytic.in_region(d, l, beta, rho, theta):
            return None
        g = analytic.psi_grad(d, l, beta, rho, theta)
        h_rr, h_tt, h_rt = analytic.psi_hessian(d, l, beta, rho, theta)
        det = h_rr * h_tt - h_rt * h_rt
        if det == 0:
            return None
        step_r = (h_tt * g[0] - h_rt * g[1]) / det
        step_t = (h_rr * g[1] - h_rt * g[0]) / det
        rho, theta = rho - step_r, theta - step_t
        if abs(step_r) + abs(step_t) < 1e-14:
            break
    if not analytic.in_region(d, l, beta, rho, theta):
        return None
    return rho, theta


def _flood_fill_components(mask: np.ndarray) -> int:
    """4-neighbor connected components of True cells."""
    n_rows, n_cols = mask.shape
    seen = np.zeros_like(mask, dtype=bool)
    components = 0
    for i in range(n_rows):
        for j in range(n_cols):
            if not mask[i, j] or seen[i, j]:
                continue
            components += 1
            stack = [(i, j)]
            seen[i, j] = True
            while stack:
                a, c = stack.pop()
                for na, nc in ((a - 1, c), (a + 1, c), (a, c - 1), (a, c + 1)):
                    if 0 <= na < n_rows and 0 <= nc < n_cols and mask[na, nc] and not seen[na, nc]:
                        seen[na, nc] = True
                        stack.append((na, nc))
    return components


def surface_scan(d: int, l: int, beta: float, grid_n: int) -> dict:
    """Grid evaluation of the overlap exponent and its Hessian determinant.

    Reports the grid argmax polished by Newton steps, its distance to the
    product point, the gap of the maximum to twice the single-copy rate,
    the flood-fill count of positive-determinant components, and the grid
    rows (rho, theta, psi, detH) for CSV emission.
    """
    rho_grid = beta * (np.arange(grid_n) + 0.5) / grid_n
    theta_grid = l * beta * (np.arange(grid_n) + 0.5) / grid_n
    psi_vals = np.full((grid_n, grid_n), np.nan)
    det_vals = np.full((grid_n, grid_n), np.nan)
    mask_pos = np.zeros((grid_n, grid_n), dtype=bool)
    best = (-math.inf, None)
    for i, rho in enumerate(rho_grid):
        for j, theta in enumerate(theta_grid):
            if not analytic.in_region(d, l, beta, rho, theta):
                continue
            value = analytic.psi(d, l, beta, rho, theta)
            h_rr, h_tt, h_rt = analytic.psi_hessian(d, l, beta, rho, theta)
            det = h_rr * h_tt - h_rt * h_rt
            psi_vals[i, j] = value
            det_vals[i, j] = det
            mask_pos[i, j] = det > 0
            if value > best[0]:
                best = (value, (rho, theta))

    rho_b, theta_b = best[1]
    polished = _newton_polish(d, l, beta, rho_b, theta_b)
    if polished is not None:
        rho_p, theta_p = polished
        psi_max = analytic.psi(d, l, beta, rho_p, theta_p)
        if psi_max < best[0]:  # Newton drifted; keep the grid point
            rho_p, theta_p, psi_max = rho_b, theta_b, best[0]
    else:
        rho_p, theta_p, psi_max = rho_b, theta_b, best[0]

    rho_star, theta_star = analytic.product_point(d, l, beta)
    rows = []
    for i, rho in enumerate(rho_grid):
        for j, theta in enumerate(theta_grid):
            if not np.isnan(psi_vals[i, j]):
                rows.append(
                    (beta, float(rho), float(theta), float(psi_vals[i, j]), float(det_vals[i, j]))
                )
    return {
        "config": _config(None, d=d, l=l, beta=beta, grid_n=grid_n),
        "argmax": (float(rho_p), float(theta_p)),
        "argmax_grid": (float(rho_b), float(theta_b)),
        "argmax_gap_to_product": (
            float(abs(rho_p - rho_star)),
            float(abs(theta_p - theta_star)),
        ),
        "cell_size": (float(beta / grid_n), float(l * beta / grid_n)),
        "psi_max": float(psi_max),
        "psi_gap": float(psi_max - 2 * analytic.phi(d, l, beta)),
        "det_positive_components": _flood_fill_components(mask_pos),
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# output helpers


def write_json(path: str, result: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2, default=str)
        fh.write("\n")


def write_csv(path: str, result: dict, columns: list[str], rows: list) -> None:
    """CSV with the configuration embedded as '# key=value' header lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in result["config"].items():
            fh.write(f"# {key}={value}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            if isinstance(row, dict):
                fh.write(",".join(str(row[c]) for c in columns) + "\n")
            else:
                fh.write(",".join(str(v) for v in row) + "\n")
