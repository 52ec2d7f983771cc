"""Command-line front end.

Subcommands: `solve` (one equilibrium), `sweep` (parameter grid to CSV),
`verify` (oracle suites, JSON report), `compare` (observable versus hidden),
and `figures` (kappa-sweep datasets written as CSV with rendered PNGs).

Exit codes: 0 success, 1 verification failure, 2 validation error,
3 no trade (the record is still printed).  Numbers are serialized with 17
significant digits; CSV is comma-separated with LF line endings.
FLEXSEARCH_THREADS caps parallel grid evaluation (0 = auto); outputs do not
depend on the thread count.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from .core import ModelParams, Regime, validate
from .errors import FlexSearchError, NoTrade, ValidationError
from .hidden import (
    MixedEquilibrium,
    competition_hidden_solve,
    monopoly_mixed_solve,
    perturbed,
)
from .learning import optimal_policy, continuation_value
from .observable import (
    comparative_static_signs,
    competition_solve,
    monopoly_equilibrium,
)
from .oracles import (
    RandomWalkConfig,
    check_mixed_equilibrium,
    concave_envelope,
    simulate_two_barrier,
)
from .runtime import csv_lines, fmt_value, parallel_map
from .welfare import FigureKind, compare_competition, compare_monopoly, figure_data

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_VALIDATION = 2
EXIT_NO_TRADE = 3

OBSERVABLE_COLUMNS = [
    "mu", "c", "kappa", "outside", "regime", "price", "profit",
    "consumer_welfare", "stop_probability", "expected_duration",
]
HIDDEN_COLUMNS = [
    "mu", "c", "kappa", "outside", "regime", "active_search",
    "p_lower", "p_upper", "x_lower", "x_upper", "profit",
    "consumer_welfare", "value_slope", "value_intercept",
]
SWEEP_OBSERVABLE_COLUMNS = (
    ["index", "varied_param"]
    + OBSERVABLE_COLUMNS
    + ["price_sign", "profit_sign", "welfare_sign"]
)
SWEEP_HIDDEN_COLUMNS = ["index", "varied_param"] + HIDDEN_COLUMNS
COMPARE_COLUMNS = [
    "mu", "c", "kappa", "monopoly",
    "observable_price", "observable_profit", "observable_welfare",
    "hidden_p_lower", "hidden_profit", "hidden_welfare",
    "consumer_prefers_observable", "firm_prefers_observable",
]


def _print_record(record: Dict, columns: Sequence[str], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record, default=fmt_value, indent=2))
    else:
        print("\n".join(csv_lines(columns, [[record.get(c) for c in columns]])))


def _hidden_regime(eq: MixedEquilibrium) -> Regime:
    return Regime.SEARCH_AND_LEARN if eq.active_search else Regime.LEARN_NO_SEARCH


def _observable_record(params: ModelParams, c_given: bool, monopoly: bool) -> Dict:
    eq = monopoly_equilibrium(params.mu, params.kappa, params.outside) if monopoly \
        else competition_solve(params)
    return {
        "mu": params.mu,
        "c": params.c if c_given else None,
        "kappa": params.kappa,
        "outside": params.outside,
        "regime": eq.regime.value,
        "price": eq.price,
        "profit": eq.profit,
        "consumer_welfare": eq.consumer_welfare,
        "stop_probability": eq.stop_probability,
        "expected_duration": eq.expected_duration,
    }


def _hidden_record(params: ModelParams, c_given: bool, monopoly: bool) -> Dict:
    base = {
        "mu": params.mu,
        "c": params.c if c_given else None,
        "kappa": params.kappa,
        "outside": params.outside if monopoly else 0.0,
    }
    try:
        eq = monopoly_mixed_solve(params.mu, params.kappa, params.outside) if monopoly \
            else competition_hidden_solve(params)
    except NoTrade:
        base.update({
            "regime": Regime.NO_TRADE.value, "active_search": False,
            "p_lower": 0.0, "p_upper": 0.0, "x_lower": 0.0, "x_upper": 0.0,
            "profit": 0.0, "consumer_welfare": 0.0,
            "value_slope": 0.0, "value_intercept": 0.0,
        })
        return base
    base.update({
        "regime": _hidden_regime(eq).value,
        "active_search": eq.active_search,
        "p_lower": eq.p_lower,
        "p_upper": eq.p_upper,
        "x_lower": eq.x_lower,
        "x_upper": eq.x_upper,
        "profit": eq.profit,
        "consumer_welfare": eq.consumer_welfare,
        "value_slope": eq.value_line.slope,
        "value_intercept": eq.value_line.intercept,
    })
    return base


def _build_params(args, require_c: bool = True) -> ModelParams:
    c = args.c
    if c is None:
        if require_c and not args.monopoly:
            raise ValidationError("the market model requires --c")
        # any value below 1/(4*kappa) works: single-firm paths ignore c
        c = 1.0 / (8.0 * args.kappa)
    return validate(args.mu, c, args.kappa, getattr(args, "outside", 0.0))


def cmd_solve(args) -> int:
    params = _build_params(args)
    c_given = args.c is not None
    if args.hidden:
        record = _hidden_record(params, c_given, args.monopoly)
    else:
        record = _observable_record(params, c_given, args.monopoly)
    columns = HIDDEN_COLUMNS if args.hidden else OBSERVABLE_COLUMNS
    _print_record(record, columns, args.format)
    return EXIT_NO_TRADE if record["regime"] == Regime.NO_TRADE.value else EXIT_OK


def _sweep_grid(args) -> np.ndarray:
    if args.steps < 2:
        raise ValidationError(f"need at least 2 steps, got {args.steps}")
    if args.log:
        if args.start <= 0.0 or args.stop <= 0.0:
            raise ValidationError("--log needs strictly positive endpoints")
        return np.geomspace(args.start, args.stop, args.steps)
    return np.linspace(args.start, args.stop, args.steps)


def cmd_sweep(args) -> int:
    grid = _sweep_grid(args)
    fixed = {"mu": args.mu, "c": args.c, "kappa": args.kappa}
    for name, value in fixed.items():
        if name != args.vary and value is None:
            raise ValidationError(f"--{name} is required when sweeping {args.vary}")
    points: List[ModelParams] = []
    for value in grid:
        raw = dict(fixed)
        raw[args.vary] = float(value)
        try:
            points.append(validate(raw["mu"], raw["c"], raw["kappa"], args.outside))
        except ValidationError as exc:
            raise ValidationError(
                f"grid point {args.vary}={fmt_value(float(value))} invalid: {exc}"
            ) from exc

    def observable_row(item):
        index, params = item
        rec = _observable_record(params, True, monopoly=False)
        signs = comparative_static_signs(params, args.vary)
        return (
            [index, args.vary]
            + [rec[col] for col in OBSERVABLE_COLUMNS]
            + [signs.price_sign, signs.profit_sign, signs.welfare_sign]
        )

    def hidden_row(item):
        index, params = item
        rec = _hidden_record(params, True, monopoly=False)
        return [index, args.vary] + [rec[col] for col in HIDDEN_COLUMNS]

    builder = hidden_row if args.hidden else observable_row
    columns = SWEEP_HIDDEN_COLUMNS if args.hidden else SWEEP_OBSERVABLE_COLUMNS
    rows = parallel_map(builder, list(enumerate(points)))
    text = "\n".join(csv_lines(columns, rows)) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def _check(name: str, observed: float, expected: float, tolerance: float, **extra) -> Dict:
    deviation = abs(observed - expected)
    record = {
        "name": name,
        "observed": observed,
        "expected": expected,
        "deviation": deviation,
        "tolerance": tolerance,
        "passed": deviation <= tolerance,
    }
    record.update(extra)
    return record


def _walk_suite(params: ModelParams, args) -> List[Dict]:
    # snap the verified friction to the nearest value whose stopping barriers
    # sit on the +/-z step lattice, so the walk's overshoot bias is exactly
    # zero and the 4-standard-error tolerance is the whole error budget
    z = math.sqrt(args.dt)
    quarter_steps = max(5, round(1.0 / (4.0 * params.kappa * z)))
    kappa = 1.0 / (4.0 * quarter_steps * z)
    point = ModelParams(mu=params.mu, c=min(params.c, 1.0 / (8.0 * kappa)), kappa=kappa)
    config = RandomWalkConfig(
        sigma=1.0, gamma=kappa, dt=args.dt, n_paths=args.paths, seed=args.seed
    )
    checks = []
    # three interior experiments: balanced, optimistic and pessimistic priors
    for i, offset_steps in enumerate([0, quarter_steps // 2, -(quarter_steps // 2)]):
        price = point.mu - offset_steps * z
        policy = optimal_policy(point, price, 0.0)
        report = simulate_two_barrier(config, point.mu, policy.u_low, policy.u_high)
        exact_cost = kappa * (policy.u_high - point.mu) * (point.mu - policy.u_low)
        checks.append(_check(
            f"walk[{i}].hit_high", report.hit_high_fraction, policy.p_high,
            4.0 * report.stderr_hit, stderr=report.stderr_hit,
        ))
        checks.append(_check(
            f"walk[{i}].mean_cost", report.mean_cost, exact_cost,
            4.0 * report.stderr_cost, stderr=report.stderr_cost,
        ))
    return checks


def _envelope_suite(params: ModelParams, args) -> List[Dict]:
    rng = np.random.Generator(np.random.Philox(key=args.seed))
    cases = [
        (params.mu, params.mu, 0.0, params.kappa),
        (params.mu, params.mu - 1.0 / (8.0 * params.kappa), 0.25, params.kappa),
        (params.mu, params.mu + 1.0 / (8.0 * params.kappa), 0.1, params.kappa),
    ]
    while len(cases) < 20:
        kappa = float(rng.uniform(0.25, 4.0))
        offset = float(rng.uniform(-3.0, 3.0)) / (4.0 * kappa)
        price = float(rng.uniform(0.0, 1.0))
        outside = float(rng.uniform(0.0, 0.5))
        cases.append((offset + price + outside, price, outside, kappa))
    checks = []
    for i, (mu, price, outside, kappa) in enumerate(cases):
        point = ModelParams(mu=mu, c=min(params.c, 1.0 / (8.0 * kappa)), kappa=kappa)
        closed = continuation_value(point, price, outside)
        center = outside + price
        lo = min(mu, center - 1.0 / (4.0 * kappa)) - 1.0 / kappa
        hi = max(mu, center + 1.0 / (4.0 * kappa)) + 1.0 / kappa
        us = np.linspace(lo, hi, 4001)
        penalty = kappa * (us - mu) ** 2
        ws = np.where(us - price <= outside, outside - penalty, us - price - penalty)
        value = concave_envelope(list(zip(us.tolist(), ws.tolist())), mu)
        checks.append(_check(f"envelope[{i}]", value, closed, 1e-5))
    return checks


def _mixed_suite(params: ModelParams, args) -> List[Dict]:
    if params.mu <= 0.0:
        raise ValidationError("the mixed suite requires mu > 0 (with trade)")
    checks = []
    for label, eq in (
        ("monopoly", monopoly_mixed_solve(params.mu, params.kappa, 0.0)),
        ("competition", competition_hidden_solve(params)),
    ):
        report = check_mixed_equilibrium(eq, params, grid_n=200)
        for field in ("max_indifference_dev", "max_affine_dev", "mean_dev"):
            checks.append(_check(
                f"mixed[{label}].{field}", getattr(report, field), 0.0, 1e-8
            ))
        probe = check_mixed_equilibrium(perturbed(eq, 1e-3), params, grid_n=200)
        checks.append({
            "name": f"mixed[{label}].perturbation_detected",
            "observed": probe.max_indifference_dev,
            "expected": ">1e-4",
            "deviation": probe.max_indifference_dev,
            "tolerance": 1e-4,
            "passed": probe.max_indifference_dev > 1e-4,
        })
    return checks


def cmd_verify(args) -> int:
    params = _build_params(args, require_c=False)
    suites = ["walk", "envelope", "mixed"] if args.suite == "all" else [args.suite]
    checks: List[Dict] = []
    for suite in suites:
        if suite == "walk":
            checks.extend(_walk_suite(params, args))
        elif suite == "envelope":
            checks.extend(_envelope_suite(params, args))
        else:
            checks.extend(_mixed_suite(params, args))
    passed = all(c["passed"] for c in checks)
    report = {
        "suite": args.suite,
        "seed": args.seed,
        "params": {"mu": params.mu, "c": params.c, "kappa": params.kappa},
        "config": {"paths": args.paths, "dt": args.dt},
        "checks": checks,
        "passed": passed,
        "failed_checks": [c["name"] for c in checks if not c["passed"]],
    }
    print(json.dumps(report, default=fmt_value, indent=2))
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def cmd_compare(args) -> int:
    params = _build_params(args)
    if args.monopoly:
        comparison = compare_monopoly(params.mu, params.kappa)
    else:
        comparison = compare_competition(params)
    record = {
        "mu": params.mu,
        "c": params.c if args.c is not None else None,
        "kappa": params.kappa,
        "monopoly": args.monopoly,
        "observable_price": comparison.observable.price,
        "observable_profit": comparison.observable.profit,
        "observable_welfare": comparison.observable.consumer_welfare,
        "hidden_p_lower": comparison.hidden.price,
        "hidden_profit": comparison.hidden.profit,
        "hidden_welfare": comparison.hidden.consumer_welfare,
        "consumer_prefers_observable": comparison.consumer_prefers_observable,
        "firm_prefers_observable": comparison.firm_prefers_observable,
    }
    _print_record(record, COMPARE_COLUMNS, args.format)
    # observable no-trade needs mu < -1/(4*kappa) < 0, which forces hidden
    # no-trade as well, so one regime check identifies the degenerate case
    obs_regime = (
        monopoly_equilibrium(params.mu, params.kappa, 0.0).regime
        if args.monopoly
        else competition_solve(params).regime
    )
    return EXIT_NO_TRADE if obs_regime is Regime.NO_TRADE else EXIT_OK


def cmd_figures(args) -> int:
    from . import report as figure_report

    if args.c <= 0.0:
        raise ValidationError(f"search cost must be positive, got c={args.c}")
    kappa_max = 1.0 / (4.0 * args.c)
    start = args.start if args.start is not None else 0.02 * kappa_max
    stop = args.stop if args.stop is not None else 0.98 * kappa_max
    if args.log:
        grid = np.geomspace(start, stop, args.steps)
    else:
        grid = np.linspace(start, stop, args.steps)
    kind = FigureKind(args.figure)
    rows = figure_data(kind, args.mu, args.c, grid)
    csv_path, png_path = figure_report.write_figure(rows, kind, args.outdir)
    print(f"wrote {csv_path}")
    print(f"wrote {png_path}")
    return EXIT_OK


def _add_param_flags(parser, need_mu=True):
    if need_mu:
        parser.add_argument("--mu", type=float, required=True, help="prior product value")
    parser.add_argument("--c", type=float, default=None, help="per-visit search cost")
    parser.add_argument("--kappa", type=float, required=True,
                        help="information friction (cost per unit posterior variance)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flexsearch",
        description="Search-market solver with flexible information acquisition",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one equilibrium")
    _add_param_flags(p_solve)
    p_solve.add_argument("--outside", type=float, default=0.0, help="outside option")
    p_solve.add_argument("--hidden", action="store_true", help="prices observed after learning")
    p_solve.add_argument("--monopoly", action="store_true", help="single firm (c ignored)")
    p_solve.add_argument("--format", choices=["csv", "json"], default="csv")
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="evaluate a parameter grid to CSV")
    p_sweep.add_argument("--vary", choices=["mu", "c", "kappa"], required=True)
    p_sweep.add_argument("--from", dest="start", type=float, required=True)
    p_sweep.add_argument("--to", dest="stop", type=float, required=True)
    p_sweep.add_argument("--steps", type=int, required=True)
    p_sweep.add_argument("--log", action="store_true", help="log-spaced grid")
    p_sweep.add_argument("--mu", type=float, default=None)
    p_sweep.add_argument("--c", type=float, default=None)
    p_sweep.add_argument("--kappa", type=float, default=None)
    p_sweep.add_argument("--outside", type=float, default=0.0)
    p_sweep.add_argument("--hidden", action="store_true")
    p_sweep.add_argument("--out", default=None, help="output CSV path (default stdout)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run verification oracles")
    p_verify.add_argument("--suite", choices=["walk", "envelope", "mixed", "all"],
                          default="all")
    p_verify.add_argument("--paths", type=int, default=100_000)
    p_verify.add_argument("--dt", type=float, default=1e-4)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--mu", type=float, default=1.0)
    p_verify.add_argument("--c", type=float, default=0.01)
    p_verify.add_argument("--kappa", type=float, default=1.0)
    p_verify.set_defaults(func=cmd_verify, monopoly=False, outside=0.0)

    p_compare = sub.add_parser("compare", help="observable versus hidden prices")
    _add_param_flags(p_compare)
    p_compare.add_argument("--monopoly", action="store_true")
    p_compare.add_argument("--format", choices=["csv", "json"], default="csv")
    p_compare.set_defaults(func=cmd_compare, outside=0.0)

    p_fig = sub.add_parser("figures", help="kappa-sweep figure data (CSV + PNG)")
    p_fig.add_argument("--figure", choices=[k.value for k in FigureKind], required=True)
    p_fig.add_argument("--mu", type=float, required=True)
    p_fig.add_argument("--c", type=float, required=True)
    p_fig.add_argument("--from", dest="start", type=float, default=None)
    p_fig.add_argument("--to", dest="stop", type=float, default=None)
    p_fig.add_argument("--steps", type=int, default=200)
    p_fig.add_argument("--log", action="store_true")
    p_fig.add_argument("--outdir", default=".")
    p_fig.set_defaults(func=cmd_figures)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NoTrade as exc:
        print(f"error: NoTrade: {exc}", file=sys.stderr)
        return EXIT_NO_TRADE
    except FlexSearchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
