"""Shared fixtures: the reference scenario and a feasible-setup generator."""
from __future__ import annotations

import numpy as np
import pytest

from freshopt import (
    Exponential,
    MarketParams,
    OptionContract,
    TruncatedNormal,
    Uniform,
    check_feasibility,
    optimal_plan,
    retailer_expected_profit,
)

FAMILIES = ("uniform", "exponential", "truncated-normal")


@pytest.fixture
def baseline_demand():
    return Uniform(0.0, 100.0)


@pytest.fixture
def baseline_market():
    return MarketParams(p=50.0, g=10.0, w0=25.0, c=15.0, beta=0.1, theta=0.8)


@pytest.fixture
def baseline_contract():
    return OptionContract(c0=5.0, ce=35.0)


def random_feasible_setup(rng: np.random.Generator, family: str):
    """One feasible (demand, market, contract, k) with a healthy profit.

    Rejection-samples until the contract passes screening and the optimal
    biased profit clears 50, so relative comparisons stay well-conditioned.
    Demand scales are kept moderate to bound the brute-force search boxes.
    """
    while True:
        p = float(rng.uniform(40.0, 80.0))
        g = float(rng.uniform(0.0, 15.0))
        theta = float(rng.uniform(0.6, 1.0))
        beta = float(rng.uniform(0.05, 0.25))
        ce = float(rng.uniform(0.35, 0.6) * (p + g))
        c0 = float(rng.uniform(0.08, 0.3) * (p + g - ce))
        w0 = float(c0 + rng.uniform(0.3, 0.85) * ce)
        if not w0 < p:
            continue
        c = float(rng.uniform(0.25, 0.7) * w0 * (1.0 - beta))
        k = float(rng.uniform(0.7, 1.35))
        if family == "uniform":
            lo = float(rng.uniform(0.0, 20.0))
            d = Uniform(lo, lo + float(rng.uniform(60.0, 140.0)))
        elif family == "exponential":
            d = Exponential(float(rng.uniform(0.025, 0.06)))
        elif family == "truncated-normal":
            d = TruncatedNormal(float(rng.uniform(30.0, 80.0)), float(rng.uniform(10.0, 30.0)))
        else:
            raise ValueError(f"unknown family {family!r}")
        try:
            m = MarketParams(p=p, g=g, w0=w0, c=c, beta=beta, theta=theta)
            o = OptionContract(c0=c0, ce=ce)
        except ValueError:
            continue
        if not check_feasibility(m, o, k).ok:
            continue
        plan = optimal_plan(d, m, o, k)
        if retailer_expected_profit(d, m, o, k, plan).total < 50.0:
            continue
        return d, m, o, k
