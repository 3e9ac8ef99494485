"""Expected- and realized-profit functions for retailer, supplier, and chain.

Two demand measures coexist on purpose.  The retailer orders against the
demand it believes in, ``k * theta * x``, so retailer expectations use the
scale ``theta * k``.  The supplier and the integrated chain face the true
demand ``theta * x`` and their expectations use the scale ``theta`` alone.
Realized-profit functions take the scale explicitly so a simulation can
verify either measure independently of the closed forms.

Ordered units shrink by the transport-loss fraction ``beta`` before they
can serve demand: a plan (Q1, Qq) puts ``Q1*(1-beta)`` firm units and
``Qq*(1-beta)`` option units on the shelf.

The stockout penalty ``g`` sits on the retailer's ledger: the retailer's
profit carries the shortage term while the supplier's carries none.
Who ultimately bears that cost is a matter of negotiation the model does
not arbitrate; these formulas fix one convention and keep it everywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .demand import DemandDistribution


class InfeasibleContract(ValueError):
    """Option contract terms that break the model's price ordering."""


@dataclass(frozen=True)
class MarketParams:
    """Economic constants of the market.

    p: unit sale price; g: unit stockout penalty; w0: unit wholesale price;
    c: supplier unit production cost; beta: transport/unloading loss
    fraction; theta: freshness factor scaling effective demand.
    """

    p: float
    g: float
    w0: float
    c: float
    beta: float
    theta: float

    def __post_init__(self):
        problems = []
        if not (self.p > self.w0):
            problems.append(f"need p > w0, got p={self.p}, w0={self.w0}")
        if not (self.w0 > self.c):
            problems.append(f"need w0 > c, got w0={self.w0}, c={self.c}")
        if not (self.c >= 0.0):
            problems.append(f"need c >= 0, got c={self.c}")
        if not (self.g >= 0.0):
            problems.append(f"need g >= 0, got g={self.g}")
        if not (0.0 < self.beta < 1.0):
            problems.append(f"need 0 < beta < 1, got beta={self.beta}")
        if not (0.0 < self.theta <= 1.0):
            problems.append(f"need 0 < theta <= 1, got theta={self.theta}")
        if problems:
            raise ValueError("invalid market parameters: " + "; ".join(problems))


@dataclass(frozen=True)
class OptionContract:
    """Per-unit option premium c0 (paid up front) and exercise price ce."""

    c0: float
    ce: float

    def __post_init__(self):
        if not (self.c0 > 0.0 and self.ce > 0.0):
            raise ValueError(
                f"option contract requires c0 > 0 and ce > 0, got c0={self.c0}, ce={self.ce}"
            )


@dataclass(frozen=True)
class OrderPlan:
    """Spot quantity plus option quantity; the total is their exact sum."""

    q_spot: float
    q_option: float

    def __post_init__(self):
        if not (self.q_spot >= 0.0 and self.q_option >= 0.0):
            raise ValueError(
                f"order quantities must be nonnegative, got "
                f"q_spot={self.q_spot}, q_option={self.q_option}"
            )

    @property
    def q_total(self) -> float:
        return self.q_spot + self.q_option


@dataclass(frozen=True)
class ProfitBreakdown:
    """Total expected profit with its additive components."""

    total: float
    terms: dict[str, float]


def require_feasible_contract(m: MarketParams, o: OptionContract) -> None:
    """Raise InfeasibleContract unless the contract respects the market.

    A workable contract needs w0 < c0 + ce (otherwise every unit would be
    ordered through options) and c0 + ce < p + g (otherwise the total
    critical fractile leaves (0, 1) and options are worthless).
    """
    if not (m.w0 < o.c0 + o.ce):
        raise InfeasibleContract(
            f"assumption-4 violated: w0={m.w0} >= c0+ce={o.c0 + o.ce}"
        )
    if not (o.c0 + o.ce < m.p + m.g):
        raise InfeasibleContract(
            f"fractile-range-total violated: c0+ce={o.c0 + o.ce} >= p+g={m.p + m.g}"
        )


def _require_positive_k(k: float) -> None:
    if not (k > 0.0) or not math.isfinite(k):
        raise ValueError(f"overconfidence multiplier k must be finite and > 0, got {k}")


def _retailer_terms(d: DemandDistribution, m: MarketParams, o: OptionContract,
                    k: float, q_spot, q_option) -> dict[str, float]:
    # Closed-form expectations under the believed demand scale theta*k.
    scale = m.theta * k
    eff = 1.0 - m.beta
    stock = (q_spot + q_option) * eff
    spot_stock = q_spot * eff
    option_stock = q_option * eff
    partial_total = d.cdf_integral(stock / scale)
    partial_spot = d.cdf_integral(spot_stock / scale)

    expected_sales = stock - scale * partial_total
    expected_exercised = option_stock - scale * (partial_total - partial_spot)
    expected_shortage = scale * d.mean() - stock + scale * partial_total

    return {
        "revenue": m.p * expected_sales,
        "premium_cost": -o.c0 * option_stock,
        "exercise_cost": -o.ce * expected_exercised,
        "wholesale_cost": -m.w0 * spot_stock,
        "shortage_cost": -m.g * expected_shortage,
    }


def retailer_expected_profit(d: DemandDistribution, m: MarketParams, o: OptionContract,
                             k: float, plan: OrderPlan) -> ProfitBreakdown:
    """Retailer expected profit under its believed demand scale theta*k.

    Itemized as sale revenue minus option premium, expected exercise
    payments, wholesale cost, and expected stockout penalty (the penalty
    covers the believed demand the stock cannot serve).
    """
    require_feasible_contract(m, o)
    _require_positive_k(k)
    terms = {name: float(v) for name, v in
             _retailer_terms(d, m, o, k, plan.q_spot, plan.q_option).items()}
    return ProfitBreakdown(total=float(sum(terms.values())), terms=terms)


def retailer_profit_gradient(d: DemandDistribution, m: MarketParams, o: OptionContract,
                             k: float, plan: OrderPlan) -> tuple[float, float]:
    """Partials of the retailer's expected profit w.r.t. (q_spot, q_option)."""
    require_feasible_contract(m, o)
    _require_positive_k(k)
    eff = 1.0 - m.beta
    scale = m.theta * k
    cdf_total = d.cdf(plan.q_total * eff / scale)
    cdf_spot = d.cdf(plan.q_spot * eff / scale)
    pg = m.p + m.g
    d_option = eff * (pg - (pg - o.ce) * cdf_total - (o.c0 + o.ce))
    d_spot = eff * (pg - (pg - o.ce) * cdf_total - o.ce * cdf_spot - m.w0)
    return (float(d_spot), float(d_option))


def supplier_expected_profit(d: DemandDistribution, m: MarketParams, o: OptionContract,
                             plan: OrderPlan) -> float:
    """Supplier expected profit; the expectation is under the true demand.

    Wholesale and premium income are deterministic once the plan is fixed;
    only the exercised option volume is random, and it is driven by the
    actual demand theta*x, regardless of what the retailer believes.
    """
    require_feasible_contract(m, o)
    eff = 1.0 - m.beta
    stock = plan.q_total * eff
    spot_stock = plan.q_spot * eff
    option_stock = plan.q_option * eff
    partial_total = d.cdf_integral(stock / m.theta)
    partial_spot = d.cdf_integral(spot_stock / m.theta)
    expected_exercised = option_stock - m.theta * (partial_total - partial_spot)
    return float(
        m.w0 * spot_stock
        + o.c0 * option_stock
        + o.ce * expected_exercised
        - m.c * plan.q_total
    )


def supplier_profit_gap(d: DemandDistribution, m: MarketParams, o: OptionContract,
                        k: float) -> float:
    """Supplier profit at the rational optimum minus at the biased optimum.

    Both profits come from ``supplier_expected_profit`` evaluated at the
    closed-form optimal plans for k=1 and for the given k.  The sign tells
    whether the retailer's belief bias costs the supplier money; with the
    shipped example parameters the sign is governed by the production cost
    (a high c makes extra biased-up orders a net loss for the supplier).
    """
    require_feasible_contract(m, o)
    _require_positive_k(k)
    from .optimizer import optimal_plan  # local import: optimizer depends on this module

    biased = optimal_plan(d, m, o, k)
    rational = optimal_plan(d, m, o, 1.0)
    return supplier_expected_profit(d, m, o, rational) - supplier_expected_profit(d, m, o, biased)


def chain_expected_profit(d: DemandDistribution, m: MarketParams, q_total: float) -> float:
    """Expected profit of the integrated chain stocking q_total in total."""
    if not (q_total >= 0.0):
        raise ValueError(f"q_total must be nonnegative, got {q_total}")
    eff = 1.0 - m.beta
    stock = q_total * eff
    pg = m.p + m.g
    partial = d.cdf_integral(stock / m.theta)
    return float(pg * stock - pg * m.theta * partial - m.c * q_total - m.g * m.theta * d.mean())


def realized_retailer_profit(x, demand_scale: float, m: MarketParams, o: OptionContract,
                             plan: OrderPlan):
    """Retailer profit for one demand outcome x, at the given belief scale.

    Options are exercised only for demand the spot stock cannot cover, and
    the exercised volume is capped by the effective option stock.
    Vectorized over x.
    """
    demand = demand_scale * np.asarray(x, dtype=float)
    eff = 1.0 - m.beta
    stock = plan.q_total * eff
    spot_stock = plan.q_spot * eff
    option_stock = plan.q_option * eff
    exercised = np.clip(demand - spot_stock, 0.0, option_stock)
    sales = np.minimum(demand, stock)
    shortage = np.maximum(demand - stock, 0.0)
    out = (m.p * sales - o.c0 * option_stock - o.ce * exercised
           - m.w0 * spot_stock - m.g * shortage)
    return float(out) if out.ndim == 0 else out


def realized_supplier_profit(x, m: MarketParams, o: OptionContract, plan: OrderPlan):
    """Supplier profit for one demand outcome x; exercise follows true demand.

    Vectorized over x.
    """
    demand = m.theta * np.asarray(x, dtype=float)
    eff = 1.0 - m.beta
    spot_stock = plan.q_spot * eff
    option_stock = plan.q_option * eff
    exercised = np.clip(demand - spot_stock, 0.0, option_stock)
    out = (m.w0 * spot_stock + o.c0 * option_stock + o.ce * exercised
           - m.c * plan.q_total)
    return float(out) if out.ndim == 0 else out


def realized_chain_profit(x, m: MarketParams, q_total: float):
    """Integrated-chain profit for one demand outcome x.  Vectorized over x."""
    demand = m.theta * np.asarray(x, dtype=float)
    stock = q_total * (1.0 - m.beta)
    out = (m.p * np.minimum(demand, stock) - m.c * q_total
           - m.g * np.maximum(demand - stock, 0.0))
    return float(out) if out.ndim == 0 else out
