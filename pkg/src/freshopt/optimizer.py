"""Closed-form optimal order plans and the coordinating option prices.

The retailer's problem is a two-fractile newsvendor: the believed total
stock sits at the quantile of ``(p+g-ce-c0)/(p+g-ce)`` and the spot part
at the quantile of ``(c0+ce-w0)/ce``, both scaled by ``k*theta/(1-beta)``.
The integrated chain stocks at the quantile of
``((p+g)(1-beta)-c)/((p+g)(1-beta))`` scaled by ``theta/(1-beta)``.
Channel coordination picks one contract price so the decentralized total
equals the centralized one.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.optimize import brentq

from .demand import DemandDistribution
from .profit import MarketParams, OptionContract, OrderPlan

# Critical fractiles exactly 0 or 1 (e.g. zero production cost) are nudged
# inside (0,1) before quantile evaluation; unbounded families have no
# finite quantile at 1.
_FRACTILE_CLAMP = 1e-12

# Acceptable relative error on the coordination identity Q* == Q**.
_COORDINATION_TOL = 1e-9


class Infeasible(ValueError):
    """Requested optimum does not exist for these parameters."""

    def __init__(self, message: str, report: "FeasibilityReport | None" = None):
        super().__init__(message)
        self.report = report


class NonCoordinable(ValueError):
    """No valid option premium can coordinate the channel here."""


class NoRoot(ValueError):
    """No exercise price inside the admissible bracket solves coordination."""


@dataclass(frozen=True)
class Violation:
    name: str
    message: str


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of screening a (market, contract, k) combination."""

    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.violations)

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"{v.name} ({v.message})" for v in self.violations)


def total_fractile(m: MarketParams, o: OptionContract) -> float:
    """Critical fractile for the believed total stock."""
    return (m.p + m.g - o.ce - o.c0) / (m.p + m.g - o.ce)


def spot_fractile(m: MarketParams, o: OptionContract) -> float:
    """Critical fractile for the believed spot stock."""
    return (o.c0 + o.ce - m.w0) / o.ce


def check_feasibility(m: MarketParams, o: OptionContract, k: float) -> FeasibilityReport:
    """Screen the model's preconditions; reports, never raises."""
    violations: list[Violation] = []
    if not (k > 0.0 and math.isfinite(k)):
        violations.append(Violation("k-domain", f"k must be finite and > 0, got {k}"))

    if not (m.w0 < o.c0 + o.ce):
        violations.append(Violation(
            "assumption-4", f"w0={m.w0} >= c0+ce={o.c0 + o.ce}: all orders would move to options"))

    pg_net = m.p + m.g - o.ce
    tf = total_fractile(m, o) if pg_net > 0.0 else None
    if tf is None or not (0.0 < tf < 1.0):
        shown = "undefined" if tf is None else f"{tf:.6g}"
        violations.append(Violation(
            "fractile-range-total", f"(p+g-ce-c0)/(p+g-ce) = {shown} outside (0, 1)"))

    sf = spot_fractile(m, o)
    if not (0.0 < sf < 1.0):
        violations.append(Violation(
            "fractile-range-spot", f"(c0+ce-w0)/ce = {sf:.6g} outside (0, 1)"))

    if tf is not None and 0.0 < tf < 1.0 and 0.0 < sf < 1.0 and tf < sf:
        violations.append(Violation(
            "negative-option-quantity",
            f"total fractile {tf:.6g} below spot fractile {sf:.6g}: optimal option quantity < 0"))

    return FeasibilityReport(tuple(violations))


def optimal_plan(d: DemandDistribution, m: MarketParams, o: OptionContract,
                 k: float) -> OrderPlan:
    """The retailer's profit-maximizing plan under belief scale theta*k.

    At the result the profit gradient vanishes; concavity of the objective
    makes it the unique maximum.  k = 1 gives the rational benchmark.
    """
    report = check_feasibility(m, o, k)
    if not report.ok:
        raise Infeasible(f"no optimal plan: {report.describe()}", report)
    scale = k * m.theta / (1.0 - m.beta)
    q_total = scale * d.quantile(total_fractile(m, o))
    q_spot = scale * d.quantile(spot_fractile(m, o))
    # max() only absorbs rounding dust; tf >= sf is already guaranteed
    return OrderPlan(q_spot=q_spot, q_option=max(0.0, q_total - q_spot))


def _centralized_quantile(d: DemandDistribution, m: MarketParams) -> float:
    """Demand quantile behind the centralized optimum (before scaling)."""
    capacity_value = (m.p + m.g) * (1.0 - m.beta)
    if not (capacity_value > m.c):
        raise Infeasible(
            f"centralized problem infeasible: production cost c={m.c} >= "
            f"(p+g)(1-beta)={capacity_value}")
    fractile = (capacity_value - m.c) / capacity_value
    clamped = min(max(fractile, _FRACTILE_CLAMP), 1.0 - _FRACTILE_CLAMP)
    if clamped != fractile:
        warnings.warn(
            f"centralized fractile {fractile} clamped to {clamped} before quantile evaluation",
            RuntimeWarning, stacklevel=3)
    return d.quantile(clamped)


def optimal_centralized(d: DemandDistribution, m: MarketParams) -> float:
    """Total quantity maximizing the integrated chain's expected profit.

    Independent of the retailer's belief bias and of the option contract.
    """
    return (m.theta / (1.0 - m.beta)) * _centralized_quantile(d, m)


def coordinating_premium(d: DemandDistribution, m: MarketParams, ce: float,
                         k: float) -> float:
    """Option premium making the biased retailer order the centralized total.

    Solves, in closed form, for the c0 at which the retailer's total
    fractile quantile equals the centralized quantile shrunk by 1/k.
    The resulting (c0, ce) pair must still be a workable contract;
    otherwise NonCoordinable reports which condition broke.
    """
    if not (ce > 0.0):
        raise ValueError(f"exercise price must be > 0, got {ce}")
    if not (k > 0.0 and math.isfinite(k)):
        raise ValueError(f"k must be finite and > 0, got {k}")
    margin = m.p + m.g - ce
    if not (margin > 0.0):
        raise NonCoordinable(
            f"fractile-range-total: ce={ce} >= p+g={m.p + m.g} leaves no option margin")

    x_central = _centralized_quantile(d, m)
    believed_quantile = x_central / k
    mass_below = d.cdf(believed_quantile)
    if mass_below >= 1.0:
        # Bounded-support families: the shrunk quantile fell past the top of
        # the demand support, so no positive premium can coordinate.
        k_floor = _k_floor_for_premium(d, x_central)
        hint = f" (requires k > {k_floor:.6g})" if k_floor is not None else ""
        raise NonCoordinable(
            f"k-domain: coordinating premium would be <= 0 at k={k}{hint}")
    if mass_below <= 0.0:
        # Demand floor above the shrunk quantile: the premium would have to
        # eat the whole option margin.
        lo = getattr(d, "lo", 0.0)
        hint = f" (requires k < {x_central / lo:.6g})" if lo > 0.0 else ""
        raise NonCoordinable(
            f"k-domain: coordinating premium would leave no total fractile at k={k}{hint}")
    c0 = margin * (1.0 - mass_below)
    if not (m.w0 < c0 + ce):
        raise NonCoordinable(
            f"assumption-4: coordinating premium c0={c0:.6g} gives w0={m.w0} >= c0+ce={c0 + ce:.6g}")

    # Verify the identity the premium was derived from.
    contract = OptionContract(c0=c0, ce=ce)
    q_total = (k * m.theta / (1.0 - m.beta)) * d.quantile(total_fractile(m, contract))
    q_central = (m.theta / (1.0 - m.beta)) * x_central
    if abs(q_total - q_central) > _COORDINATION_TOL * q_central:
        raise ArithmeticError(
            f"coordination identity failed: decentralized total {q_total!r} vs "
            f"centralized {q_central!r}")
    return float(c0)


def _k_floor_for_premium(d: DemandDistribution, x_central: float) -> float | None:
    # Only bounded-support families can push the shrunk quantile off the top.
    hi = getattr(d, "hi", None)
    if hi is None or not (hi > 0.0):
        return None
    return x_central / hi


def coordinating_exercise_price(d: DemandDistribution, m: MarketParams, c0: float,
                                k: float) -> float:
    """Exercise price coordinating the channel at a fixed premium.

    Found by bracketed root-finding on the residual between the
    decentralized total and the centralized total.  The residual is
    strictly decreasing in ce on (0, p+g-c0); when it has no sign change
    there, no admissible price exists and NoRoot explains the k-range
    that would admit one.
    """
    if not (c0 > 0.0):
        raise ValueError(f"option premium must be > 0, got {c0}")
    if not (k > 0.0 and math.isfinite(k)):
        raise ValueError(f"k must be finite and > 0, got {k}")
    pg = m.p + m.g
    if not (c0 < pg):
        raise NoRoot(f"premium c0={c0} >= p+g={pg}: no exercise price can be admissible")

    x_central = _centralized_quantile(d, m)
    q_central = (m.theta / (1.0 - m.beta)) * x_central
    scale = k * m.theta / (1.0 - m.beta)

    def residual(ce: float) -> float:
        fractile = (pg - ce - c0) / (pg - ce)
        return scale * d.quantile(fractile) - q_central

    pad = 1e-9 * pg
    lo, hi = pad, pg - c0 - pad
    if not (lo < hi):
        raise NoRoot(f"degenerate bracket for exercise price: c0={c0} too close to p+g={pg}")
    res_lo, res_hi = residual(lo), residual(hi)
    if res_lo <= 0.0:
        k_floor = x_central / d.quantile(1.0 - c0 / pg)
        raise NoRoot(
            f"no coordinating exercise price in (0, {pg - c0:.6g}) at k={k}: "
            f"coordination at this premium requires k > {k_floor:.6g}")
    if res_hi >= 0.0:
        # Possible only when demand has a positive lower support bound.
        raise NoRoot(
            f"no coordinating exercise price in (0, {pg - c0:.6g}) at k={k}: "
            f"even the maximal admissible price leaves the decentralized total "
            f"above the centralized one (k too large for this demand floor)")
    ce = brentq(residual, lo, hi, xtol=1e-12, rtol=8.9e-16, maxiter=300)
    if abs(residual(ce)) > _COORDINATION_TOL * q_central:
        raise ArithmeticError(
            f"root-finder left coordination residual {residual(ce)!r} above tolerance")
    return float(ce)
