"""Acceptance suite for the reference scenario.

One test per criterion, each printing a PASS/FAIL line (run with ``-s`` to
see them).  The reference scenario is uniform(0,100) demand, p=50, g=10,
w0=25, c=15, beta=0.1, theta=0.8; c=15 is the unique production cost that
puts the centralized critical fractile at 13/18, which makes the scenario's
coordinating prices follow the closed forms

    c0(k) = 25 - 325/(18k)          (exercise price fixed at 35)
    ce(k) = 60 - 90k/(18k-13)       (premium fixed at 5)

Criterion 7 is expected to fail and is kept faithful on purpose: the
supplier-profit gap it asserts has the opposite sign pattern at these
parameters (see its docstring).
"""
from __future__ import annotations

import time

import numpy as np
import pytest

from conftest import FAMILIES, random_feasible_setup
from freshopt import (
    MarketParams,
    NoRoot,
    OptionContract,
    OrderPlan,
    SweepScenario,
    Uniform,
    chain_expected_profit,
    coordinating_exercise_price,
    coordinating_premium,
    default_grid_spec,
    default_k_grid,
    grid_search_plan,
    mc_expected,
    monotonicity_report,
    optimal_centralized,
    optimal_plan,
    retailer_expected_profit,
    retailer_profit_gradient,
    run_sweep,
    supplier_expected_profit,
    supplier_profit_gap,
)

DEMAND = Uniform(0.0, 100.0)
MARKET = MarketParams(p=50.0, g=10.0, w0=25.0, c=15.0, beta=0.1, theta=0.8)
CONTRACT = OptionContract(c0=5.0, ce=35.0)
Q_CENTRAL = 5200.0 / 81.0


def _report(number: int, label: str, body) -> None:
    try:
        body()
    except BaseException:
        print(f"criterion {number}: FAIL — {label}")
        raise
    print(f"criterion {number}: PASS — {label}")


def test_criterion_1_coordinating_price_formulas():
    def body():
        start = time.monotonic()
        # Fixed exercise price: premium follows 25 - 325/(18k) on [0.8, 1.5].
        for k in np.linspace(0.8, 1.5, 20):
            got = coordinating_premium(DEMAND, MARKET, 35.0, float(k))
            assert abs(got - (25.0 - 325.0 / (18.0 * k))) <= 1e-6
        # Fixed premium: the exercise price follows 60 - 90k/(18k-13) on
        # (13/18, 1.5] wherever that value is a positive admissible price;
        # elsewhere the solver must report NoRoot instead of returning it.
        for k in np.arange(0.725, 1.5001, 0.025):
            k = float(k)
            formula = 60.0 - 90.0 * k / (18.0 * k - 13.0)
            if 0.0 < formula < MARKET.p + MARKET.g - 5.0:
                got = coordinating_exercise_price(DEMAND, MARKET, 5.0, k)
                assert abs(got - formula) <= 1e-6
            else:
                with pytest.raises(NoRoot):
                    coordinating_exercise_price(DEMAND, MARKET, 5.0, k)
        assert time.monotonic() - start < 1.0

    _report(1, "coordinating prices match the scenario's closed forms", body)


def test_criterion_2_centralized_quantity():
    def body():
        got = optimal_centralized(DEMAND, MARKET)
        assert abs(got - 64.1975) <= 5e-5
        assert abs(got - 64.2) <= 0.05

    _report(2, "centralized total quantity is 64.1975", body)


def test_criterion_3_closed_form_vs_grid_search():
    def body():
        start = time.monotonic()
        rng = np.random.default_rng(20260808)
        for i in range(20):
            d, m, o, k = random_feasible_setup(rng, FAMILIES[i % 3])
            closed = optimal_plan(d, m, o, k)
            grid = grid_search_plan(d, m, o, k, default_grid_spec(d, m, k, 0.05))
            assert abs(grid.q_spot - closed.q_spot) <= 0.05 + 1e-9, (i, d.family)
            assert abs(grid.q_option - closed.q_option) <= 0.05 + 1e-9, (i, d.family)
            closed_profit = retailer_expected_profit(d, m, o, k, closed).total
            grid_profit = retailer_expected_profit(d, m, o, k, grid).total
            assert abs(grid_profit - closed_profit) <= 1e-3 * abs(closed_profit)
            assert grid_profit <= closed_profit + 1e-9
        assert time.monotonic() - start < 60.0

    _report(3, "fractile plans beat brute force on 20 random setups", body)


def test_criterion_4_analytic_vs_simulation():
    def body():
        start = time.monotonic()
        rng = np.random.default_rng(414243)
        beyond_three_sigma = 0
        for i in range(10):
            d, m, o, k = random_feasible_setup(rng, FAMILIES[i % 3])
            plan = optimal_plan(d, m, o, k)
            targets = {
                "retailer": retailer_expected_profit(d, m, o, k, plan).total,
                "supplier": supplier_expected_profit(d, m, o, plan),
                "chain": chain_expected_profit(d, m, plan.q_total),
            }
            for kind, analytic in targets.items():
                estimate = mc_expected(kind, d, m, o, k, plan, 1_000_000, 1000 + i)
                sigma = abs(estimate.mean - analytic) / estimate.stderr
                assert sigma <= 4.0, (i, kind, sigma)
                if sigma > 3.0:
                    beyond_three_sigma += 1
        assert beyond_three_sigma <= 1
        assert time.monotonic() - start < 30.0

    _report(4, "Monte-Carlo agrees with every closed form within 3 sigma", body)


def test_criterion_5_coordination_identity_on_default_grids():
    def body():
        scenarios = (
            SweepScenario(mode="fixed-exercise-price", demand=DEMAND, market=MARKET,
                          k_grid=default_k_grid("fixed-exercise-price"), fixed_ce=35.0),
            SweepScenario(mode="fixed-premium", demand=DEMAND, market=MARKET,
                          k_grid=default_k_grid("fixed-premium"), fixed_c0=5.0),
        )
        for scenario in scenarios:
            feasible = [r for r in run_sweep(scenario) if r.feasible]
            assert len(feasible) >= 5
            for row in feasible:
                assert abs(row.q_total - Q_CENTRAL) <= 1e-9 * Q_CENTRAL, row.k

    _report(5, "coordinated totals equal the centralized optimum", body)


def test_criterion_6_plan_scales_linearly_with_k():
    def body():
        base = optimal_plan(DEMAND, MARKET, CONTRACT, 1.0)
        for k in (0.5, 0.8, 1.2, 2.0):
            plan = optimal_plan(DEMAND, MARKET, CONTRACT, k)
            assert abs(plan.q_total / base.q_total - k) <= 1e-12 * k
            assert abs(plan.q_spot / base.q_spot - k) <= 1e-12 * k

    _report(6, "total and spot quantities are exactly linear in k", body)


def test_criterion_7_supplier_gap_signs():
    """Asserted sign pattern: gap > 0 for the under-ordering retailer
    (k=0.8) and gap < 0 for the over-ordering one (k=1.2).

    This check FAILS at the reference parameters, and the failure is real,
    not numerical: direct evaluation of the supplier's expected profit at
    the two plans (confirmed by Monte-Carlo averaging of realized supplier
    profit) gives gap(0.8) = -34.179 and gap(1.2) = +85.288.  With
    production cost c = 15, the extra units a biased-up retailer orders
    cost the supplier more than the rarely-exercised option revenue they
    return, so over-ordering HURTS the supplier here; the asserted pattern
    would require c below roughly 9.0, while c = 15 is pinned by the
    centralized fractile 13/18 that the rest of the scenario depends on.
    The check is kept faithful rather than loosened.
    """
    def body():
        low = supplier_profit_gap(DEMAND, MARKET, CONTRACT, 0.8)
        high = supplier_profit_gap(DEMAND, MARKET, CONTRACT, 1.2)
        assert low > 0.0, f"gap(k=0.8) = {low:.6f}, expected > 0"
        assert high < 0.0, f"gap(k=1.2) = {high:.6f}, expected < 0"

    _report(7, "supplier-profit gap signs at k=0.8 and k=1.2", body)


def _interior_plan(rng, d, m, k) -> OrderPlan:
    # Keep both believed stock positions well inside the demand support so
    # finite differences never straddle a density kink.
    total_pos = float(rng.uniform(0.05, 0.92))
    spot_pos = float(rng.uniform(0.02, total_pos - 0.01))
    scale = k * m.theta / (1.0 - m.beta)
    q_total = scale * d.quantile(total_pos)
    q_spot = scale * d.quantile(spot_pos)
    return OrderPlan(q_spot=q_spot, q_option=q_total - q_spot)


def test_criterion_8_gradient_and_concavity():
    def body():
        rng = np.random.default_rng(808)
        for _ in range(50):
            k = float(rng.uniform(0.7, 1.3))
            plan = _interior_plan(rng, DEMAND, MARKET, k)
            analytic = retailer_profit_gradient(DEMAND, MARKET, CONTRACT, k, plan)

            def profit(q1, qq):
                return retailer_expected_profit(
                    DEMAND, MARKET, CONTRACT, k, OrderPlan(q1, qq)).total

            h = 1e-4 * max(plan.q_total, 1.0)
            fd = ((profit(plan.q_spot + h, plan.q_option)
                   - profit(plan.q_spot - h, plan.q_option)) / (2 * h),
                  (profit(plan.q_spot, plan.q_option + h)
                   - profit(plan.q_spot, plan.q_option - h)) / (2 * h))
            for a, b in zip(analytic, fd):
                assert abs(a - b) <= 1e-5 * max(abs(a), abs(b), 1e-2)
            mid = profit(plan.q_spot, plan.q_option)
            hc = 1e-2 * max(plan.q_total, 1.0)
            assert (profit(plan.q_spot + hc, plan.q_option) - 2 * mid
                    + profit(plan.q_spot - hc, plan.q_option)) <= 1e-9
            assert (profit(plan.q_spot, plan.q_option + hc) - 2 * mid
                    + profit(plan.q_spot, plan.q_option - hc)) <= 1e-9

    _report(8, "analytic gradient matches differences; profit is concave", body)


def test_criterion_9_irreproducible_claims_surfaced_not_asserted():
    """Two claims sometimes attached to this scenario do not follow from
    its own closed forms (a quartic-rational supplier-profit curve, and a
    'spot order is minimal at k=1' reading of the fixed-premium sweep);
    the sweep does not encode them.  Instead it must uphold the
    coordination identity and emit a monotonicity report for human review.
    """
    def body():
        scenario = SweepScenario(mode="fixed-premium", demand=DEMAND, market=MARKET,
                                 k_grid=default_k_grid("fixed-premium"), fixed_c0=5.0)
        rows = run_sweep(scenario)
        feasible = [r for r in rows if r.feasible]
        for row in feasible:
            assert abs(row.q_total - Q_CENTRAL) <= 1e-9 * Q_CENTRAL
        report = monotonicity_report(rows)
        assert set(report.trends) == {
            "c0", "ce", "q_total", "q_spot", "q_option", "retailer_profit_believed",
            "retailer_profit_true", "supplier_profit", "chain_profit"}
        # The actual behavior the report surfaces: the re-coordinated spot
        # order rises strictly with k across the whole feasible range.
        assert report.trends["q_spot"].direction == "strictly-increasing"
        assert report.describe()

    _report(9, "inconsistent published claims are surfaced, not asserted", body)
