"""Command-line interface.

Subcommands: analytic, moments, sample, count, bruteforce, poisson,
concentration, ratio-scan, region-scan, surface.  A plain-text key=value
config file can supply defaults for any long flag; explicit flags win.
Exit codes: 0 success, 2 exact-oracle mismatch, 3 budget/cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import analytic, experiments, moments
from .core import Hypergraph, make_params
from .counting import (
    DEFAULT_NODE_BUDGET,
    count_by_size,
    cycle_census,
    max_matching,
    weighted_partition,
)
from .errors import BudgetExceeded, CapExceeded, HypermatchError, MismatchError
from .sampler import DEFAULT_ENUM_CAP, sample_conditional_on_matching, sample_uniform


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset (None) options from the config file, if any."""
    if not getattr(args, "config", None):
        return args
    cfg = _read_config(args.config)
    for key, value in cfg.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _int(value, default=None):
    return default if value is None else int(value)


def _float(value, default=None):
    return default if value is None else float(value)


def _int_list(value) -> list[int]:
    return [int(tok) for tok in str(value).split(",") if tok.strip()]


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)


def _dump_json(args, payload) -> None:
    _emit(args, json.dumps(payload, indent=2, default=str))


def _dump_csv(args, result: dict, columns: list[str], rows) -> None:
    lines = [f"# {k}={v}" for k, v in result["config"].items()]
    lines.append(",".join(columns))
    for row in rows:
        if isinstance(row, dict):
            lines.append(",".join(str(row[c]) for c in columns))
        else:
            lines.append(",".join(str(v) for v in row))
    _emit(args, "\n".join(lines))


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_analytic(args) -> int:
    d, l = _int(args.d), _int(args.l)
    beta = _float(args.beta)
    op = args.op
    if args.grid is not None and op in ("psi", "surface"):
        result = experiments.surface_scan(d, l, beta, _int(args.grid))
        _dump_csv(args, result, ["beta", "rho", "theta", "psi", "detH"], result["rows"])
        return 0
    if op == "phi":
        val, d1, d2 = analytic.phi_family(d, l, beta)
        payload = {"phi": val, "phi_prime": d1, "phi_double_prime": d2}
    elif op == "thresholds":
        payload = analytic.thresholds(d, l)
    elif op == "weighted":
        payload = analytic.weighted_optimum(d, l, _float(args.x, 1.0))
    elif op == "psi":
        payload = analytic.psi_family(
            analytic.SurfacePoint(beta, _float(args.rho), _float(args.theta)), d, l
        )
    elif op == "det":
        payload = {"det": analytic.special_point_hessian_det(d, l, beta)}
    elif op == "curve":
        payload = analytic.critical_curve(d, l, beta, _float(args.rho))
    elif op == "boundary":
        payload = analytic.boundary_restriction(d, l, beta, _float(args.rho))
    elif op == "check":
        rep = analytic.replica_symmetry_check(d, l, _float(args.x))
        payload = {
            "d": rep.d,
            "l": rep.l,
            "x": rep.x,
            "beta": rep.beta,
            "verdict": rep.verdict,
            "conditions": {
                name: {"satisfied": c.satisfied, "lhs": c.lhs, "rhs": c.rhs}
                for name, c in rep.conditions.items()
            },
        }
    elif op == "cycle-limits":
        payload = analytic.cycle_limits(d, l, beta, _int(args.k, 1))
    elif op == "maximal":
        payload = analytic.maximal_matching_asymptotics(d, l, _int(args.m))
    elif op == "poisson-tail":
        payload = analytic.poisson_tail_bounds(_float(args.mu), _float(args.epsilon))
    else:
        raise SystemExit(f"unknown analytic op: {op}")
    _dump_json(args, payload)
    return 0


def _cmd_moments(args) -> int:
    params = make_params(_int(args.m), _int(args.d), _int(args.l))

    def render(q: Fraction) -> dict:
        return {"exact": str(q), "decimal": float(q)}

    if args.scan == "k":
        rows = []
        for k in range(params.max_matching_size + 1):
            ez = moments.expected_Zk(params, k)
            ez2 = moments.second_moment(params, k)
            rows.append(
                {"k": k, "EZk": str(ez), "EZk_decimal": float(ez), "EZk2": str(ez2)}
            )
        result = {"config": {"m": params.m, "d": params.d, "l": params.l, "scan": "k"}}
        _dump_csv(args, result, ["k", "EZk", "EZk_decimal", "EZk2"], rows)
        return 0
    if args.scan == "m":
        rows = []
        for m in _int_list(args.m_list):
            pm = make_params(m, params.d, params.l)
            row = {"m": m, "EZ": str(moments.expected_Z(pm))}
            if args.k is not None:
                ez = moments.expected_Zk(pm, _int(args.k))
                row.update(EZk=str(ez), EZk_decimal=float(ez))
            rows.append(row)
        cols = ["m", "EZ"] + (["EZk", "EZk_decimal"] if args.k is not None else [])
        result = {"config": {"d": params.d, "l": params.l, "scan": "m"}}
        _dump_csv(args, result, cols, rows)
        return 0
    payload = {"m": params.m, "d": params.d, "l": params.l}
    payload["EZ"] = render(moments.expected_Z(params))
    if args.k is not None:
        k = _int(args.k)
        payload["k"] = k
        payload["EZk"] = render(moments.expected_Zk(params, k))
        payload["EZk2"] = render(moments.second_moment(params, k))
        if args.kcycle is not None:
            payload["cond_cycle"] = render(
                moments.conditional_cycle_expectation(params, k, _int(args.kcycle))
            )
    if args.h is not None:
        payload["sandwich"] = moments.stirling_sandwich(params, _int(args.h))
    _dump_json(args, payload)
    return 0


def _cmd_sample(args) -> int:
    params = make_params(_int(args.m), _int(args.d), _int(args.l))
    trials = _int(args.trials, 1)
    seed = _int(args.seed, 0)
    k = _int(args.k) if args.k is not None else None
    fmt = args.format or "text"
    lines = []
    for t in range(trials):
        if k is None:
            G = sample_uniform(params, seed, t)
        else:
            G, _ = sample_conditional_on_matching(params, k, seed, t)
        lines.append(G.to_json() if fmt == "json" else G.to_line())
    _emit(args, "\n".join(lines))
    return 0


def _cmd_count(args) -> int:
    budget = _int(args.budget, DEFAULT_NODE_BUDGET)
    b = _int(args.b, 3)
    x = _float(args.x, 1.0)
    payloads = []
    with open(args.infile, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            G = Hypergraph.from_json(line) if line.startswith("{") else Hypergraph.from_line(line)
            coeffs = count_by_size(G, budget)
            zx, _ = weighted_partition(G, x, coefficients=coeffs)
            payloads.append(
                {
                    "Z_k": coeffs,
                    "Z": sum(coeffs),
                    "Zx": zx,
                    "max": max(kk for kk, c in enumerate(coeffs) if c > 0),
                    "census": list(cycle_census(G, b).counts),
                }
            )
    _emit(args, "\n".join(json.dumps(p) for p in payloads))
    return 0


def _cmd_bruteforce(args) -> int:
    params = make_params(_int(args.m), _int(args.d), _int(args.l))
    cert = experiments.bruteforce_check(
        params, b=_int(args.b, 3), cap=_int(args.enum_cap, DEFAULT_ENUM_CAP)
    )
    _dump_json(args, cert)
    return 0


def _cmd_poisson(args) -> int:
    params = make_params(_int(args.m), _int(args.d), _int(args.l))
    result = experiments.poisson_stats(
        params,
        b=_int(args.b, 3),
        trials=_int(args.trials, 1000),
        seed=_int(args.seed, 0),
        conditional_k=_int(args.k) if args.k is not None else None,
        jobs=_int(args.jobs, 1),
    )
    if (args.format or "json") == "csv":
        _dump_csv(
            args,
            result,
            ["k", "mean", "variance", "target_mean", "stderr", "z", "var_over_mean"],
            result["per_k"],
        )
    else:
        _dump_json(args, result)
    return 0


def _cmd_concentration(args) -> int:
    result = experiments.concentration(
        _int(args.d),
        _int(args.l),
        _int_list(args.m_list),
        trials=_int(args.trials, 200),
        seed=_int(args.seed, 0),
        x=_float(args.x) if args.x is not None else None,
        node_budget=_int(args.budget, DEFAULT_NODE_BUDGET),
        jobs=_int(args.jobs, 1),
    )
    cols = ["m", "trials_used", "skipped", "median", "iqr", "gap", "target"]
    if (args.format or "csv") == "json":
        _dump_json(args, result)
    else:
        _dump_csv(args, result, cols, result["rows"])
    return 0


def _cmd_ratio_scan(args) -> int:
    result = experiments.ratio_scan(
        _int(args.d), _int(args.l), Fraction(args.k_over_m), _int_list(args.m_list)
    )
    cols = ["m", "k", "ratio", "ratio_exact", "limit", "rel_gap", "hypotheses_ok"]
    if (args.format or "csv") == "json":
        _dump_json(args, result)
    else:
        _dump_csv(args, result, cols, result["rows"])
    return 0


def _cmd_region_scan(args) -> int:
    def parse_range(text, fallback):
        if text is None:
            return fallback
        lo, _, hi = str(text).partition(":")
        return (int(lo), int(hi or lo))

    x_grid = None
    if args.x_grid is not None:
        x_grid = [float(tok) for tok in str(args.x_grid).split(",") if tok.strip()]
    result = experiments.region_scan(
        parse_range(args.d_range, (2, 6)), parse_range(args.l_range, (2, 6)), x_grid
    )
    if (args.format or "json") == "csv":
        rows = [
            {
                "d": r["d"],
                "l": r["l"],
                "x": r["x"],
                "beta": r["beta"],
                "verdict": r["verdict"],
                "phi_prime_L1": r["conditions"]["thm1_2b"]["lhs"],
            }
            for r in result["rows"]
        ]
        _dump_csv(args, result, ["d", "l", "x", "beta", "verdict", "phi_prime_L1"], rows)
    else:
        _dump_json(args, result)
    return 0


def _cmd_surface(args) -> int:
    result = experiments.surface_scan(
        _int(args.d), _int(args.l), _float(args.beta), _int(args.grid, 200)
    )
    if (args.format or "csv") == "json":
        slim = {k: v for k, v in result.items() if k != "rows"}
        _dump_json(args, slim)
    else:
        _dump_csv(args, result, ["beta", "rho", "theta", "psi", "detH"], result["rows"])
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypermatch",
        description="Matchings on random (d,l)-regular uniform hypergraphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, **flags):
        p = sub.add_parser(name)
        p.set_defaults(handler=handler)
        p.add_argument("--config", help="key=value file supplying defaults")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"])
        for flag, kw in flags.items():
            p.add_argument(f"--{flag}", **kw)
        return p

    common = {
        "d": {}, "l": {}, "m": {}, "k": {}, "x": {}, "beta": {},
        "trials": {}, "seed": {}, "b": {}, "grid": {}, "enum-cap": {"dest": "enum_cap"},
    }

    add("analytic", _cmd_analytic, op={"default": "thresholds"}, rho={}, theta={},
        mu={}, epsilon={}, **common)
    add("moments", _cmd_moments, scan={"choices": ["k", "m"]}, h={},
        kcycle={"help": "cycle length for the conditional expectation"},
        **{"m-list": {"dest": "m_list"}, **common})
    add("sample", _cmd_sample, **common)
    p_count = add("count", _cmd_count, b={}, x={}, budget={})
    p_count.add_argument("--in", dest="infile", required=True, help="instance file")
    add("bruteforce", _cmd_bruteforce, **common)
    add("poisson", _cmd_poisson, jobs={}, **common)
    add("concentration", _cmd_concentration, jobs={}, budget={},
        **{"m-list": {"dest": "m_list"}, **common})
    add("ratio-scan", _cmd_ratio_scan,
        **{"k-over-m": {"dest": "k_over_m"}, "m-list": {"dest": "m_list"}, **common})
    add("region-scan", _cmd_region_scan,
        **{"d-range": {"dest": "d_range"}, "l-range": {"dest": "l_range"},
           "x-grid": {"dest": "x_grid"}, **common})
    add("surface", _cmd_surface, **common)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = _merge_config(parser.parse_args(argv))
    try:
        return args.handler(args)
    except MismatchError as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, BudgetExceeded) as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return 3
    except HypermatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
