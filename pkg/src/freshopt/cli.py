"""Command-line interface.

Five commands over a scenario config: ``optimize`` (closed-form plan and
profit breakdown), ``evaluate`` (profits at a user-given plan),
``coordinate`` (solve the coordinating premium or exercise price),
``simulate`` (Monte-Carlo check of an expected profit), and ``sweep``
(CSV series over the overconfidence grid).

Flag values override config values, which override defaults.  Numeric
output is fixed at 6 decimal places and identical inputs produce
byte-identical output.  Exit codes: 0 success, 1 model infeasibility
(or a simulation check outside 3 standard errors), 2 configuration error.
"""
from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .config import ConfigError, ScenarioConfig, load_config
from .demand import OutOfRange
from .optimizer import (
    Infeasible,
    NonCoordinable,
    NoRoot,
    check_feasibility,
    coordinating_exercise_price,
    coordinating_premium,
    optimal_plan,
)
from .oracle import MC_KINDS, mc_expected
from .profit import (
    InfeasibleContract,
    OptionContract,
    OrderPlan,
    chain_expected_profit,
    retailer_expected_profit,
    supplier_expected_profit,
)
from .sweep import (
    MODE_FIXED_CONTRACT,
    MODE_FIXED_EXERCISE,
    MODE_FIXED_PREMIUM,
    MODES,
    SweepScenario,
    TooFewRows,
    default_k_grid,
    monotonicity_report,
    run_sweep,
    write_csv,
)

_MODEL_ERRORS = (Infeasible, InfeasibleContract, NonCoordinable, NoRoot, OutOfRange)


class _UsageError(Exception):
    """Command-line usage problem; maps to exit code 2 like config errors."""


def default_config_path() -> Path:
    """The packaged example scenario."""
    return Path(str(resources.files("freshopt").joinpath("data/default_scenario.json")))


def _fmt(value: float) -> str:
    text = f"{value:.6f}"
    return "0.000000" if text == "-0.000000" else text


def _emit(out, key: str, value) -> None:
    shown = _fmt(value) if isinstance(value, float) else str(value)
    print(f"{key}={shown}", file=out)


def _resolve_contract(config: ScenarioConfig, args) -> OptionContract:
    c0 = args.c0 if args.c0 is not None else (config.contract.c0 if config.contract else None)
    ce = args.ce if args.ce is not None else (config.contract.ce if config.contract else None)
    if c0 is None or ce is None:
        raise _UsageError(
            "no option contract available: provide --c0/--ce or a contract section in the config")
    try:
        return OptionContract(c0=c0, ce=ce)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _resolve_k(config: ScenarioConfig, args) -> float:
    k = args.k if args.k is not None else config.overconfidence
    if k <= 0.0:
        raise _UsageError(f"k must be > 0, got {k}")
    return k


def _print_breakdown(out, breakdown) -> None:
    for name, value in breakdown.terms.items():
        _emit(out, name, value)


def cmd_optimize(config: ScenarioConfig, args, out) -> int:
    contract = _resolve_contract(config, args)
    k = _resolve_k(config, args)
    plan = optimal_plan(config.demand, config.market, contract, k)
    breakdown = retailer_expected_profit(config.demand, config.market, contract, k, plan)
    _emit(out, "Q", plan.q_total)
    _emit(out, "Q1", plan.q_spot)
    _emit(out, "Qq", plan.q_option)
    _emit(out, "retailer_profit", breakdown.total)
    _print_breakdown(out, breakdown)
    return 0


def _plan_from_flags(q1: float, qq: float) -> OrderPlan:
    try:
        return OrderPlan(q_spot=q1, q_option=qq)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def cmd_evaluate(config: ScenarioConfig, args, out) -> int:
    contract = _resolve_contract(config, args)
    k = _resolve_k(config, args)
    plan = _plan_from_flags(args.q1, args.qq)
    believed = retailer_expected_profit(config.demand, config.market, contract, k, plan)
    true_view = retailer_expected_profit(config.demand, config.market, contract, 1.0, plan)
    _emit(out, "Q", plan.q_total)
    _emit(out, "Q1", plan.q_spot)
    _emit(out, "Qq", plan.q_option)
    _emit(out, "retailer_profit_believed", believed.total)
    _emit(out, "retailer_profit_true", true_view.total)
    _emit(out, "supplier_profit",
          supplier_expected_profit(config.demand, config.market, contract, plan))
    _emit(out, "chain_profit",
          chain_expected_profit(config.demand, config.market, plan.q_total))
    _print_breakdown(out, believed)
    return 0


def cmd_coordinate(config: ScenarioConfig, args, out) -> int:
    k = _resolve_k(config, args)
    d, m = config.demand, config.market
    if args.solve_exercise:
        c0 = args.c0 if args.c0 is not None else (config.contract.c0 if config.contract else None)
        if c0 is None:
            raise _UsageError("--solve-exercise needs --c0 or a contract section in the config")
        if c0 <= 0.0:
            raise _UsageError(f"option premium must be > 0, got {c0}")
        ce = coordinating_exercise_price(d, m, c0, k)
        _emit(out, "ce", ce)
    else:
        ce = args.ce if args.ce is not None else (config.contract.ce if config.contract else None)
        if ce is None:
            raise _UsageError("coordinate needs --ce or a contract section in the config")
        if ce <= 0.0:
            raise _UsageError(f"exercise price must be > 0, got {ce}")
        c0 = coordinating_premium(d, m, ce, k)
        _emit(out, "c0", c0)
    report = check_feasibility(m, OptionContract(c0=c0, ce=ce), k)
    if not report.ok:
        print(f"note: coordinated contract leaves no valid plan at k={k:g}: "
              f"{';'.join(report.names())}", file=sys.stderr)
    return 0


def cmd_simulate(config: ScenarioConfig, args, out) -> int:
    contract = _resolve_contract(config, args)
    k = _resolve_k(config, args)
    d, m = config.demand, config.market
    n = args.n if args.n is not None else config.oracle.samples
    seed = args.seed if args.seed is not None else config.oracle.seed
    if args.q1 is not None or args.qq is not None:
        if args.q1 is None or args.qq is None:
            raise _UsageError("provide both --q1 and --qq, or neither")
        plan = _plan_from_flags(args.q1, args.qq)
    else:
        plan = optimal_plan(d, m, contract, k)

    if args.kind == "retailer":
        analytic = retailer_expected_profit(d, m, contract, k, plan).total
    elif args.kind == "supplier":
        analytic = supplier_expected_profit(d, m, contract, plan)
    else:
        analytic = chain_expected_profit(d, m, plan.q_total)
    estimate = mc_expected(args.kind, d, m, contract, k, plan, n, seed)
    distance = abs(estimate.mean - analytic) / estimate.stderr if estimate.stderr > 0 else 0.0

    _emit(out, "kind", args.kind)
    _emit(out, "n", estimate.n)
    _emit(out, "seed", estimate.seed)
    _emit(out, "analytic", float(analytic))
    _emit(out, "mc_mean", estimate.mean)
    _emit(out, "mc_stderr", estimate.stderr)
    _emit(out, "sigma_distance", float(distance))
    if distance > 3.0:
        print(f"simulation check failed: |mc-analytic| = {distance:.2f} standard errors",
              file=sys.stderr)
        return 1
    return 0


def cmd_sweep(config: ScenarioConfig, args, out) -> int:
    mode = args.mode if args.mode is not None else (config.sweep.mode if config.sweep else None)
    if mode is None:
        raise _UsageError("no sweep mode: provide --mode or a sweep section in the config")

    fixed_c0 = fixed_ce = None
    if mode == MODE_FIXED_EXERCISE:
        fixed_ce = args.ce if args.ce is not None else (
            config.sweep.ce if config.sweep and config.sweep.ce is not None
            else (config.contract.ce if config.contract else None))
        if fixed_ce is None:
            raise _UsageError("fixed-exercise-price sweep needs --ce, sweep.ce, or a contract")
    elif mode == MODE_FIXED_PREMIUM:
        fixed_c0 = args.c0 if args.c0 is not None else (
            config.sweep.c0 if config.sweep and config.sweep.c0 is not None
            else (config.contract.c0 if config.contract else None))
        if fixed_c0 is None:
            raise _UsageError("fixed-premium sweep needs --c0, sweep.c0, or a contract")

    contract = None
    if mode == MODE_FIXED_CONTRACT:
        contract = _resolve_contract(config, args)

    # A config-supplied grid belongs to the mode the config declared.
    config_grid = (config.sweep.k_grid
                   if config.sweep and config.sweep.mode == mode else None)
    k_grid = config_grid if config_grid is not None else default_k_grid(mode)
    scenario = SweepScenario(
        mode=mode,
        demand=config.demand,
        market=config.market,
        k_grid=tuple(k_grid),
        fixed_ce=fixed_ce,
        fixed_c0=fixed_c0,
        contract=contract,
    )
    rows = run_sweep(scenario)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, out)
    try:
        report = monotonicity_report(rows)
        for line in report.describe().splitlines():
            print(f"monotonicity: {line}", file=sys.stderr)
    except TooFewRows as exc:
        print(f"monotonicity: skipped ({exc})", file=sys.stderr)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freshopt",
        description="Spot/option order optimization for a fresh-product retailer.")
    parser.add_argument("--config", default=None,
                        help="scenario file (default: the packaged example scenario)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, plan_flags=False):
        p.add_argument("--k", type=float, default=None, help="overconfidence multiplier")
        p.add_argument("--c0", type=float, default=None, help="option premium override")
        p.add_argument("--ce", type=float, default=None, help="exercise price override")
        if plan_flags:
            p.add_argument("--q1", type=float, default=None, help="spot order quantity")
            p.add_argument("--qq", type=float, default=None, help="option order quantity")

    p = sub.add_parser("optimize", help="closed-form optimal plan and profit breakdown")
    add_common(p)

    p = sub.add_parser("evaluate", help="expected profits at a given plan")
    add_common(p)
    p.add_argument("--q1", type=float, required=True, help="spot order quantity")
    p.add_argument("--qq", type=float, required=True, help="option order quantity")

    p = sub.add_parser("coordinate", help="solve the channel-coordinating price")
    add_common(p)
    p.add_argument("--solve-exercise", action="store_true",
                   help="solve the exercise price at a fixed premium instead of the premium")

    p = sub.add_parser("simulate", help="Monte-Carlo check of an expected profit")
    add_common(p, plan_flags=True)
    p.add_argument("--kind", choices=MC_KINDS, required=True)
    p.add_argument("--n", type=int, default=None, help="sample count")
    p.add_argument("--seed", type=int, default=None, help="stream seed")

    p = sub.add_parser("sweep", help="overconfidence sweep as CSV")
    add_common(p)
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        config = load_config(args.config if args.config is not None else default_config_path())
        handler = {
            "optimize": cmd_optimize,
            "evaluate": cmd_evaluate,
            "coordinate": cmd_coordinate,
            "simulate": cmd_simulate,
            "sweep": cmd_sweep,
        }[args.command]
        return handler(config, args, out)
    except (ConfigError, _UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _MODEL_ERRORS as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
