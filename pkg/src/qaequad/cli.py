"""Command-line front end: ``qaequad <command> [flags]``.

Exit codes: 0 success or member, 1 non-member or infeasible (or a table
mismatch), 2 usage error, 3 internal consistency error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from typing import Sequence

import numpy as np

from . import analysis
from .angles import DEFAULT_ZERO_TOL, GridFunction, GridSpec, build_angle_table, check_membership, mobius_transform
from .encoder import PROFILES, GroverConfig, build_grover_power, encoding_cost, feasibility
from .estimation import Schedule, estimate_integral
from .integrate import BUILTIN, as_rule, get_function, sample
from .simulator import ConsistencyError

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

DEFAULT_EPS_GRID = tuple(float(e) for e in np.logspace(-2, -8, 25))
DEFAULT_S_GRID = (0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45)

# Noise-free simulator estimates published for n = 2, 2048 shots per level,
# K = {0, 1} ({0, 2} for the constant function).
TABLE1 = {
    ("g0", "left"): 0.2499999974, ("g0", "midpoint"): 0.2499999974,
    ("g0", "right"): 0.2499999974, ("g0", "simpson"): 0.2499999974,
    ("g1", "left"): 0.3749999974, ("g1", "midpoint"): 0.4999999987,
    ("g1", "right"): 0.6249999976, ("g1", "simpson"): 0.4999999983,
    ("g2", "left"): 0.4999999987, ("g2", "midpoint"): 0.4999999987,
    ("g2", "right"): 0.4999999987, ("g2", "simpson"): 0.4999999987,
}
TABLE1_TOL = 1e-6
TABLE1_SHOTS = 2048


class UsageError(ValueError):
    pass


def _floats(text: str, what: str) -> list[float]:
    items = [t for t in text.replace(" ", "").split(",") if t]
    if not items:
        raise UsageError(f"{what} is empty")
    try:
        return [float(t) for t in items]
    except ValueError:
        raise UsageError(f"cannot parse {what} {text!r}") from None


def _ints(text: str, what: str) -> list[int]:
    vals = _floats(text, what)
    if any(v != int(v) for v in vals):
        raise UsageError(f"{what} must be integers")
    return [int(v) for v in vals]


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QAE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"QAE_SEED={env!r} is not an integer") from None


def _load_values(path: str) -> GridFunction:
    with open(path) as fh:
        vals = json.load(fh)
    if not isinstance(vals, list) or not vals:
        raise UsageError("values file must hold a non-empty JSON array")
    size = len(vals)
    if size & (size - 1):
        raise UsageError(f"values file has {size} entries; need a power of two")
    return GridFunction(GridSpec(size.bit_length() - 1), np.asarray(vals, dtype=float))


def _grids(args, rule) -> list[tuple[str, GridFunction]]:
    """Grid functions to analyse: one per single-run rule, three for Simpson."""
    if args.values_file:
        if rule.kind == "simpson":
            raise UsageError("a values file is a single grid; simpson needs --fn")
        return [(rule.kind, _load_values(args.values_file))]
    parts = ("left", "midpoint", "right") if rule.kind == "simpson" else (rule.kind,)
    f = get_function(args.fn)
    return [(p, sample(f, p, args.n)) for p in parts]


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)


def _finite(x):
    return None if x is None or (isinstance(x, float) and not math.isfinite(x)) else x


# -- commands ----------------------------------------------------------------------

def cmd_check_degree(args) -> int:
    if args.d is None:
        raise UsageError("check-degree needs --d")
    rule = as_rule(args.rule)
    reports = {}
    for part, g in _grids(args, rule):
        reports[part] = check_membership(g, args.d, args.zero_tol).to_dict()
    member = all(r["member"] for r in reports.values())
    if len(reports) == 1:
        out = next(iter(reports.values()))
    else:
        out = {"member": member, "d": args.d, "components": reports}
    _emit(args, _json(out))
    return EXIT_OK if member else EXIT_NEGATIVE


def cmd_build_circuit(args) -> int:
    rule = as_rule(args.rule)
    if rule.kind == "simpson":
        raise UsageError("build circuits per component rule (left, mid, right)")
    levels = _ints(args.K, "--K")
    k = max(levels)
    if min(levels) < 0:
        raise UsageError("--K levels must be non-negative")
    try:
        hw = PROFILES[args.hw_profile]
    except KeyError:
        raise UsageError(f"unknown hardware profile {args.hw_profile!r}") from None
    (_, g), = _grids(args, rule)
    e = mobius_transform(build_angle_table(g), args.zero_tol)
    circ = build_grover_power(e, k, args.zero_tol, args.keep_zeros)
    cfg = GroverConfig(k, args.spin_echo)
    cost = encoding_cost(e, cfg, hw, args.zero_tol, args.keep_zeros)
    feas = feasibility(e, cfg, hw, args.zero_tol, args.keep_zeros)
    out = {"circuit": circ.to_dict(), "cost": cost.to_dict(), "feasibility": feas.to_dict()}
    _emit(args, _json(out))
    return EXIT_OK if feas.feasible[-1] else EXIT_NEGATIVE


def cmd_estimate(args) -> int:
    rule = as_rule(args.rule)
    levels = _ints(args.K, "--K")
    sched = Schedule.uniform(levels, args.shots)
    seed = _seed(args)
    if args.values_file:
        f = _load_values(args.values_file)
        truth = None
    else:
        f = get_function(args.fn)
        truth = f.integral
    res = estimate_integral(f, rule, args.n, sched, args.mode, seed)
    out = res.to_dict()
    out["I_true"] = truth
    out["abs_error"] = None if truth is None else abs(res.I_hat - truth)
    _emit(args, _json(out))
    return EXIT_OK


def _eps_grid(args) -> list[float]:
    if args.eps_grid is None:
        return list(DEFAULT_EPS_GRID)
    return _floats(args.eps_grid, "--eps-grid")


def _s_grid(args) -> list[float]:
    if args.s_grid is None:
        return list(DEFAULT_S_GRID)
    return _floats(args.s_grid, "--s-grid")


def _table(args, rows: list[dict], columns: Sequence[str]) -> str:
    if args.format == "json":
        return _json([{c: _finite(r[c]) for c in columns} for r in rows])
    return analysis.to_csv(rows, columns)


def cmd_tradeoff(args) -> int:
    rule = as_rule(args.rule)
    eps = _eps_grid(args)
    f = get_function(args.fn)
    sup = f.deriv_sup(rule.order)
    ds = [None] if args.d_list is None else _ints(args.d_list, "--d")
    rows = []
    for d in ds:
        for pt in analysis.tradeoff_curve(rule, d, sup, analysis.CostModel(), eps):
            row = {"rule": rule.kind, "d": "n" if d is None else d}
            row.update(vars(pt))
            rows.append(row)
    cols = ("rule", "d") + analysis.TRADEOFF_COLUMNS
    _emit(args, _table(args, rows, cols))
    return EXIT_OK


def cmd_separation(args) -> int:
    rows = [vars(r) for r in analysis.separation_curve(_s_grid(args), _eps_grid(args),
                                                       analysis.CostModel())]
    _emit(args, _table(args, rows, analysis.SEPARATION_COLUMNS))
    return EXIT_OK


def cmd_sobolev(args) -> int:
    grid = _s_grid(args)
    rows = analysis.sobolev_rows(grid, grid, args.m_max)
    _emit(args, _table(args, rows, analysis.SOBOLEV_COLUMNS))
    return EXIT_OK


def reproduce_table1(scan_points: int | None = None) -> list[dict]:
    kw = {} if scan_points is None else {"scan_points": scan_points}
    rows = []
    for (fn, rule), expected in TABLE1.items():
        levels = (0, 2) if fn == "g0" else (0, 1)
        sched = Schedule.uniform(levels, TABLE1_SHOTS)
        got = estimate_integral(get_function(fn), rule, 2, sched, "exact", **kw).I_hat
        rows.append({"fn": fn, "rule": rule, "K": list(levels), "expected": expected,
                     "I_hat": got, "diff": abs(got - expected),
                     "pass": abs(got - expected) <= TABLE1_TOL})
    return rows


def cmd_reproduce(args) -> int:
    if args.target != "table1":
        raise UsageError(f"unknown reproduction target {args.target!r}")
    t0 = time.perf_counter()
    rows = reproduce_table1()
    elapsed = time.perf_counter() - t0
    ok = all(r["pass"] for r in rows)
    if args.format == "csv":
        cols = ("fn", "rule", "expected", "I_hat", "diff", "pass")
        _emit(args, analysis.to_csv(rows, cols))
    else:
        _emit(args, _json({"tolerance": TABLE1_TOL, "all_pass": ok, "rows": rows}))
    print(f"table1: {sum(r['pass'] for r in rows)}/{len(rows)} within {TABLE1_TOL:g} "
          f"({elapsed:.2f} s)", file=sys.stderr)
    return EXIT_OK if ok else EXIT_NEGATIVE


# -- parser --------------------------------------------------------------------------

def _add_input(p, rule_default="left"):
    p.add_argument("--fn", choices=sorted(BUILTIN), default="g1")
    p.add_argument("--values-file", help="JSON array of 2^n grid values")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--rule", choices=("left", "mid", "midpoint", "right", "simpson"),
                   default=rule_default)
    p.add_argument("--zero-tol", type=float, default=DEFAULT_ZERO_TOL)


def _add_output(p, formats=("json", "csv"), default="json"):
    p.add_argument("--out", help="write here instead of stdout")
    p.add_argument("--format", choices=formats, default=default)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qaequad", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-degree", help="multilinear degree test of the angle map")
    _add_input(p)
    p.add_argument("--d", type=int)
    _add_output(p, ("json",))
    p.set_defaults(func=cmd_check_degree)

    p = sub.add_parser("build-circuit", help="emit Q^k A circuit JSON and its cost report")
    _add_input(p)
    p.add_argument("--K", default="0", help="comma list; the circuit is built for the largest k")
    p.add_argument("--spin-echo", action="store_true")
    p.add_argument("--hw-profile", default="triangulum60", choices=sorted(PROFILES))
    p.add_argument("--keep-zeros", action=argparse.BooleanOptionalAction, default=True)
    _add_output(p, ("json",))
    p.set_defaults(func=cmd_build_circuit)

    p = sub.add_parser("estimate", help="run the encode / amplify / MLAE pipeline")
    _add_input(p)
    p.add_argument("--K", default="0,1")
    p.add_argument("--shots", type=int, default=2048)
    p.add_argument("--mode", choices=("exact", "stochastic"), default="exact")
    p.add_argument("--seed", type=int, default=None, help="falls back to $QAE_SEED, then 0")
    _add_output(p, ("json",))
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("tradeoff", help="gate-count versus accuracy curves")
    p.add_argument("--fn", choices=sorted(BUILTIN), default="g1")
    p.add_argument("--rule", choices=("left", "mid", "midpoint", "right", "simpson"),
                   default="midpoint")
    p.add_argument("--d", dest="d_list", default=None,
                   help="comma list of degrees (default: generic d = n*)")
    p.add_argument("--eps-grid")
    _add_output(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("separation", help="quantum versus classical cost for the g_s family")
    p.add_argument("--s-grid")
    p.add_argument("--eps-grid")
    _add_output(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_separation)

    p = sub.add_parser("sobolev", help="Sobolev series partial sums on an s x s' grid")
    p.add_argument("--s-grid")
    p.add_argument("--m-max", type=int, default=60)
    _add_output(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_sobolev)

    p = sub.add_parser("reproduce", help="re-run a published table and diff it")
    p.add_argument("target", choices=("table1",))
    _add_output(p)
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"consistency error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
