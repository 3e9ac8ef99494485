"""Sensitivity sweeps over the retailer's overconfidence multiplier.

Three modes: hold the exercise price fixed and re-coordinate via the
premium at every k; hold the premium fixed and re-coordinate via the
exercise price; or hold the whole contract fixed.  Rows that cannot be
solved or fail feasibility are flagged with a reason instead of aborting
the sweep, so singular k regions show up in the output rather than
silently vanishing.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .demand import DemandDistribution
from .optimizer import (
    Infeasible,
    NonCoordinable,
    NoRoot,
    check_feasibility,
    coordinating_exercise_price,
    coordinating_premium,
    optimal_plan,
)
from .profit import (
    MarketParams,
    OptionContract,
    chain_expected_profit,
    retailer_expected_profit,
    supplier_expected_profit,
)

MODE_FIXED_EXERCISE = "fixed-exercise-price"
MODE_FIXED_PREMIUM = "fixed-premium"
MODE_FIXED_CONTRACT = "fixed-contract"
MODES = (MODE_FIXED_EXERCISE, MODE_FIXED_PREMIUM, MODE_FIXED_CONTRACT)

CSV_COLUMNS = (
    "k", "c0", "ce", "q_total", "q_spot", "q_option",
    "retailer_profit_believed", "retailer_profit_true",
    "supplier_profit", "chain_profit", "feasible", "note",
)

_NUMERIC_COLUMNS = CSV_COLUMNS[1:10]


class TooFewRows(ValueError):
    """Not enough feasible rows to classify monotonicity."""


def default_k_grid(mode: str) -> tuple[float, ...]:
    """Default k grids: a coarse one for premium re-coordination, a fine
    one elsewhere (fine enough to expose the low-k singular region)."""
    if mode == MODE_FIXED_EXERCISE:
        return _k_range(0.8, 1.5, 0.05)
    return _k_range(0.75, 1.5, 0.01)


def _k_range(start: float, stop: float, step: float) -> tuple[float, ...]:
    count = int(round((stop - start) / step)) + 1
    return tuple(round(start + i * step, 12) for i in range(count))


@dataclass(frozen=True)
class SweepScenario:
    """One sweep: a mode, its fixed value, a k grid, and the base setting."""

    mode: str
    demand: DemandDistribution
    market: MarketParams
    k_grid: tuple[float, ...]
    fixed_ce: float | None = None
    fixed_c0: float | None = None
    contract: OptionContract | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if len(self.k_grid) == 0:
            raise ValueError("k_grid must not be empty")
        if any(k <= 0.0 for k in self.k_grid):
            raise ValueError("k_grid values must all be > 0")
        if any(b <= a for a, b in zip(self.k_grid, self.k_grid[1:])):
            raise ValueError("k_grid must be strictly increasing")
        if self.mode == MODE_FIXED_EXERCISE and self.fixed_ce is None:
            raise ValueError("fixed-exercise-price mode requires fixed_ce")
        if self.mode == MODE_FIXED_PREMIUM and self.fixed_c0 is None:
            raise ValueError("fixed-premium mode requires fixed_c0")
        if self.mode == MODE_FIXED_CONTRACT and self.contract is None:
            raise ValueError("fixed-contract mode requires a contract")


@dataclass(frozen=True)
class SweepRow:
    """One k of a sweep; infeasible rows keep solved prices but no plan."""

    k: float
    c0: float | None = None
    ce: float | None = None
    q_total: float | None = None
    q_spot: float | None = None
    q_option: float | None = None
    retailer_profit_believed: float | None = None
    retailer_profit_true: float | None = None
    supplier_profit: float | None = None
    chain_profit: float | None = None
    feasible: bool = False
    note: str = ""


def run_sweep(scenario: SweepScenario) -> list[SweepRow]:
    """Solve every k on the grid; failures yield flagged rows, never raise."""
    return [_solve_row(scenario, k) for k in scenario.k_grid]


def _solve_row(s: SweepScenario, k: float) -> SweepRow:
    d, m = s.demand, s.market
    c0: float | None
    ce: float | None
    if s.mode == MODE_FIXED_EXERCISE:
        ce = s.fixed_ce
        try:
            c0 = coordinating_premium(d, m, ce, k)
        except (Infeasible, NonCoordinable) as exc:
            return SweepRow(k=k, ce=ce, note=f"{type(exc).__name__}: {exc}")
    elif s.mode == MODE_FIXED_PREMIUM:
        c0 = s.fixed_c0
        try:
            ce = coordinating_exercise_price(d, m, c0, k)
        except (Infeasible, NoRoot) as exc:
            return SweepRow(k=k, c0=c0, note=f"{type(exc).__name__}: {exc}")
    else:
        c0, ce = s.contract.c0, s.contract.ce

    contract = OptionContract(c0=c0, ce=ce)
    report = check_feasibility(m, contract, k)
    if not report.ok:
        return SweepRow(k=k, c0=c0, ce=ce, note=";".join(report.names()))

    plan = optimal_plan(d, m, contract, k)
    return SweepRow(
        k=k,
        c0=c0,
        ce=ce,
        q_total=plan.q_total,
        q_spot=plan.q_spot,
        q_option=plan.q_option,
        retailer_profit_believed=retailer_expected_profit(d, m, contract, k, plan).total,
        retailer_profit_true=retailer_expected_profit(d, m, contract, 1.0, plan).total,
        supplier_profit=supplier_expected_profit(d, m, contract, plan),
        chain_profit=chain_expected_profit(d, m, plan.q_total),
        feasible=True,
    )


@dataclass(frozen=True)
class ColumnTrend:
    direction: str  # strictly-increasing | strictly-decreasing | non-monotone
    first_violation: tuple[float, float] | None = None


@dataclass(frozen=True)
class MonotonicityReport:
    trends: dict[str, ColumnTrend]

    def describe(self) -> str:
        lines = []
        for column, trend in self.trends.items():
            text = f"{column}={trend.direction}"
            if trend.first_violation is not None:
                a, b = trend.first_violation
                text += f" (first violation between k={a:g} and k={b:g})"
            lines.append(text)
        return "\n".join(lines)


def monotonicity_report(rows: list[SweepRow]) -> MonotonicityReport:
    """Classify each numeric column over the feasible k range.

    A column is strict in one direction only if every adjacent pair is;
    anything else (including a constant column) is non-monotone, reported
    with the first adjacent pair that breaks the direction suggested by
    the first step.
    """
    feasible = [r for r in rows if r.feasible]
    if len(feasible) < 3:
        raise TooFewRows(
            f"monotonicity needs at least 3 feasible rows, got {len(feasible)}")
    trends: dict[str, ColumnTrend] = {}
    ks = [r.k for r in feasible]
    for column in _NUMERIC_COLUMNS:
        values = [getattr(r, column) for r in feasible]
        diffs = [b - a for a, b in zip(values, values[1:])]
        if all(dv > 0.0 for dv in diffs):
            trends[column] = ColumnTrend("strictly-increasing")
        elif all(dv < 0.0 for dv in diffs):
            trends[column] = ColumnTrend("strictly-decreasing")
        else:
            if diffs[0] > 0.0:
                idx = next(i for i, dv in enumerate(diffs) if dv <= 0.0)
            elif diffs[0] < 0.0:
                idx = next(i for i, dv in enumerate(diffs) if dv >= 0.0)
            else:
                idx = 0
            trends[column] = ColumnTrend("non-monotone", (ks[idx], ks[idx + 1]))
    return MonotonicityReport(trends)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        text = f"{value:.6f}"
        return "0.000000" if text == "-0.000000" else text
    return str(value)


def write_csv(rows: list[SweepRow], stream) -> None:
    """Fixed-column CSV: '.' decimals, ',' delimiter, header mandatory."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_format_cell(getattr(row, c)) for c in CSV_COLUMNS])


def rows_to_csv(rows: list[SweepRow]) -> str:
    buffer = io.StringIO()
    write_csv(rows, buffer)
    return buffer.getvalue()
