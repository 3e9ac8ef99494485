"""Independent verification engines for the closed-form results.

``mc_expected`` estimates each expected profit by averaging realized
profits over inverse-transform samples, sharing no code path with the
partial-integral algebra it checks.  ``grid_search_plan`` maximizes the
retailer's profit surface by brute force, checking the fractile optimizer.

Sampling is chunked: every chunk owns a child stream spawned from
(seed, chunk index) and chunks are reduced in fixed order, so a serial
run and any worker-parallel run of the same (seed, n) agree bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .demand import DemandDistribution
from .profit import (
    MarketParams,
    OptionContract,
    OrderPlan,
    realized_chain_profit,
    realized_retailer_profit,
    realized_supplier_profit,
    require_feasible_contract,
)

MC_KINDS = ("retailer", "supplier", "chain")

_CHUNK = 1 << 17


@dataclass(frozen=True)
class McEstimate:
    """Monte-Carlo mean with its standard error; reproducible via (seed, n)."""

    mean: float
    stderr: float
    n: int
    seed: int


@dataclass(frozen=True)
class GridSpec:
    """Search box [q1_range] x [qq_range] walked at the given step."""

    q1_range: tuple[float, float]
    qq_range: tuple[float, float]
    step: float

    def __post_init__(self):
        for name, (lo, hi) in (("q1_range", self.q1_range), ("qq_range", self.qq_range)):
            if not (0.0 <= lo <= hi):
                raise ValueError(f"{name} must satisfy 0 <= lo <= hi, got ({lo}, {hi})")
        if not (self.step > 0.0):
            raise ValueError(f"step must be > 0, got {self.step}")


def chunk_streams(seed: int, n: int) -> list[np.random.SeedSequence]:
    """Child seed sequences for the fixed-size sample chunks of a run."""
    n_chunks = (n + _CHUNK - 1) // _CHUNK
    return list(np.random.SeedSequence(seed).spawn(n_chunks))


def mc_expected(kind: str, d: DemandDistribution, m: MarketParams, o: OptionContract,
                k: float, plan: OrderPlan, n: int, seed: int) -> McEstimate:
    """Monte-Carlo estimate of an expected profit.

    kind selects the party: retailer profits are realized under the
    believed demand scale theta*k, supplier and chain under true theta.
    """
    if kind not in MC_KINDS:
        raise ValueError(f"kind must be one of {MC_KINDS}, got {kind!r}")
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"sample count must be an integer >= 1, got {n}")
    if kind in ("retailer", "supplier"):
        require_feasible_contract(m, o)

    if kind == "retailer":
        scale = m.theta * k
        evaluate = lambda x: realized_retailer_profit(x, scale, m, o, plan)
    elif kind == "supplier":
        evaluate = lambda x: realized_supplier_profit(x, m, o, plan)
    else:
        evaluate = lambda x: realized_chain_profit(x, m, plan.q_total)

    count = 0
    mean = 0.0
    m2 = 0.0
    remaining = n
    for child in chunk_streams(seed, n):
        take = min(_CHUNK, remaining)
        remaining -= take
        rng = np.random.Generator(np.random.PCG64(child))
        profits = np.asarray(evaluate(d.sample(rng, size=take)), dtype=float)
        chunk_mean = float(profits.mean())
        chunk_m2 = float(np.sum((profits - chunk_mean) ** 2))
        delta = chunk_mean - mean
        total = count + take
        mean += delta * take / total
        m2 += chunk_m2 + delta * delta * count * take / total
        count = total

    stderr = math.sqrt(m2 / (count - 1) / count) if count > 1 else 0.0
    return McEstimate(mean=mean, stderr=stderr, n=n, seed=seed)


def _lattice(bounds: tuple[float, float], step: float) -> np.ndarray:
    lo, hi = bounds
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def grid_search_plan(d: DemandDistribution, m: MarketParams, o: OptionContract,
                     k: float, spec: GridSpec) -> OrderPlan:
    """Grid point maximizing the retailer's expected profit.

    Evaluates the raw profit surface (no contract screening, so degenerate
    contracts can be probed too).  The surface separates into a function
    of the total quantity plus a function of the spot quantity, which lets
    the search price every lattice cell from two one-dimensional passes.
    Ties break toward smaller q_spot, then smaller q_option.
    """
    q1s = _lattice(spec.q1_range, spec.step)
    qqs = _lattice(spec.qq_range, spec.step)
    n1, nq = len(q1s), len(qqs)

    eff = 1.0 - m.beta
    scale = m.theta * k
    pg = m.p + m.g
    totals = (q1s[0] + qqs[0]) + spec.step * np.arange(n1 + nq - 1)

    partial_total = np.asarray(d.cdf_integral(totals * eff / scale), dtype=float)
    partial_spot = np.asarray(d.cdf_integral(q1s * eff / scale), dtype=float)
    total_part = pg * eff * totals - (pg - o.ce) * scale * partial_total - (o.c0 + o.ce) * eff * totals
    spot_part = (o.c0 + o.ce - m.w0) * eff * q1s - o.ce * scale * partial_spot

    best_value = -math.inf
    best_i = best_j = 0
    for i in range(n1):
        candidates = total_part[i:i + nq] + spot_part[i]
        j = int(np.argmax(candidates))
        value = float(candidates[j])
        if value > best_value:
            best_value, best_i, best_j = value, i, j
    return OrderPlan(q_spot=float(q1s[best_i]), q_option=float(qqs[best_j]))


def default_grid_spec(d: DemandDistribution, m: MarketParams, k: float,
                      step: float = 0.05) -> GridSpec:
    """Search box guaranteed to contain the optimum for valid fractiles."""
    reach = d.quantile(0.9999) * k * m.theta / (1.0 - m.beta)
    return GridSpec(q1_range=(0.0, reach), qq_range=(0.0, reach), step=step)
