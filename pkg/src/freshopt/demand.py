"""Probability layer for market demand.

Every profit formula in this package reduces to three distribution
primitives: the CDF ``F``, its inverse, and the partial integral
``int_0^a F(x) dx``.  The classes here provide those primitives for the
supported demand families, together with reproducible inverse-transform
sampling.  All families live on the nonnegative half-line, as demand for
a perishable good must.
"""
from __future__ import annotations

import dataclasses
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import ndtr, ndtri


class OutOfRange(ValueError):
    """Quantile level outside the open interval (0, 1)."""


# Target absolute accuracy of the partial integral of F.
_QUAD_ABS_TOL = 1e-9


def _scalar_or_array(values: np.ndarray, scalar_input: bool):
    return float(values) if scalar_input else values


class DemandDistribution(ABC):
    """A nonnegative market-demand law."""

    family: ClassVar[str]

    @abstractmethod
    def cdf(self, x):
        """F(x); accepts scalars or numpy arrays."""

    @abstractmethod
    def mean(self) -> float:
        """E[x]."""

    @abstractmethod
    def _quantile(self, q: float) -> float:
        ...

    @abstractmethod
    def _cdf_integral(self, a):
        ...

    @abstractmethod
    def _inverse_transform(self, u):
        """Map uniform(0,1) draws to demand values; vectorized."""

    def quantile(self, q: float) -> float:
        """Smallest x with F(x) >= q, for q strictly inside (0, 1)."""
        if not 0.0 < q < 1.0:
            raise OutOfRange(f"quantile level must be in (0, 1), got {q}")
        return self._quantile(q)

    def cdf_integral(self, a):
        """int_0^a F(x) dx for a >= 0; accepts scalars or numpy arrays.

        Nondecreasing and convex in ``a``, zero at ``a = 0``, and never
        larger than ``a`` itself.
        """
        arr = np.asarray(a, dtype=float)
        if np.any(arr < 0.0):
            raise ValueError("cdf_integral requires a >= 0")
        return _scalar_or_array(self._cdf_integral(arr), arr.ndim == 0)

    def sample(self, stream, size=None):
        """Inverse-transform draw(s) from ``stream`` (a numpy Generator).

        Identical stream state gives identical draws, which is what makes
        the simulation oracles reproducible.
        """
        u = stream.random(size)
        return self._inverse_transform(u)

    def params(self) -> dict[str, float]:
        """Family-specific parameters, for configs and reporting."""
        return {f.name: getattr(self, f.name) for f in dataclasses.fields(self)}  # type: ignore[arg-type]


@dataclass(frozen=True)
class Uniform(DemandDistribution):
    """Uniform demand on [lo, hi] with 0 <= lo < hi."""

    lo: float
    hi: float

    family: ClassVar[str] = "uniform"

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi) or not math.isfinite(self.hi):
            raise ValueError(
                f"uniform demand requires 0 <= lo < hi, got lo={self.lo}, hi={self.hi}"
            )

    def cdf(self, x):
        arr = np.asarray(x, dtype=float)
        vals = np.clip((arr - self.lo) / (self.hi - self.lo), 0.0, 1.0)
        return _scalar_or_array(vals, arr.ndim == 0)

    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def _quantile(self, q: float) -> float:
        return self.lo + q * (self.hi - self.lo)

    def _cdf_integral(self, a):
        inside = np.clip(a, self.lo, self.hi) - self.lo
        return inside * inside / (2.0 * (self.hi - self.lo)) + np.maximum(a - self.hi, 0.0)

    def _inverse_transform(self, u):
        return self.lo + u * (self.hi - self.lo)


@dataclass(frozen=True)
class Exponential(DemandDistribution):
    """Exponential demand with the given rate (mean 1/rate)."""

    rate: float

    family: ClassVar[str] = "exponential"

    def __post_init__(self):
        if not (self.rate > 0.0) or not math.isfinite(self.rate):
            raise ValueError(f"exponential demand requires rate > 0, got {self.rate}")

    def cdf(self, x):
        arr = np.asarray(x, dtype=float)
        vals = np.where(arr > 0.0, -np.expm1(-self.rate * np.maximum(arr, 0.0)), 0.0)
        return _scalar_or_array(vals, arr.ndim == 0)

    def mean(self) -> float:
        return 1.0 / self.rate

    def _quantile(self, q: float) -> float:
        return -math.log1p(-q) / self.rate

    def _cdf_integral(self, a):
        # a - (1 - exp(-rate*a))/rate, written with expm1 so small a stay accurate
        return a + np.expm1(-self.rate * a) / self.rate

    def _inverse_transform(self, u):
        return -np.log1p(-u) / self.rate


@dataclass(frozen=True)
class TruncatedNormal(DemandDistribution):
    """Normal(mu, sigma) demand truncated at 0 and renormalized.

    The mass a plain normal would put on negative demand is discarded and
    the remainder rescaled, so the support is exactly [0, inf).
    """

    mu: float
    sigma: float

    family: ClassVar[str] = "truncated-normal"

    def __post_init__(self):
        if not (self.sigma > 0.0) or not math.isfinite(self.sigma) or not math.isfinite(self.mu):
            raise ValueError(
                f"truncated-normal demand requires finite mu and sigma > 0, "
                f"got mu={self.mu}, sigma={self.sigma}"
            )

    @cached_property
    def _mass_below_zero(self) -> float:
        return float(ndtr(-self.mu / self.sigma))

    @cached_property
    def _mass_above_zero(self) -> float:
        return float(ndtr(self.mu / self.sigma))

    def cdf(self, x):
        arr = np.asarray(x, dtype=float)
        z = (arr - self.mu) / self.sigma
        vals = (ndtr(z) - self._mass_below_zero) / self._mass_above_zero
        vals = np.where(arr <= 0.0, 0.0, np.clip(vals, 0.0, 1.0))
        return _scalar_or_array(vals, arr.ndim == 0)

    def mean(self) -> float:
        alpha = -self.mu / self.sigma
        density_at_cut = math.exp(-0.5 * alpha * alpha) / math.sqrt(2.0 * math.pi)
        return self.mu + self.sigma * density_at_cut / self._mass_above_zero

    def _quantile(self, q: float) -> float:
        hi = max(self.mu + 10.0 * self.sigma, self.sigma)
        while self.cdf(hi) < q:
            hi *= 2.0
        root = brentq(lambda x: self.cdf(x) - q, 0.0, hi, xtol=1e-13, rtol=8.9e-16, maxiter=200)
        return float(root)

    def _cdf_integral(self, a):
        flat = np.atleast_1d(np.asarray(a, dtype=float))
        order = np.argsort(flat, kind="stable")
        out = np.empty_like(flat)
        # Integrate incrementally along the sorted points: each adaptive
        # segment is tiny, so accumulated error stays far below the target.
        total = 0.0
        prev = 0.0
        for idx in order:
            target = flat[idx]
            if target > prev:
                piece, _ = quad(self.cdf, prev, target,
                                epsabs=_QUAD_ABS_TOL * 1e-3, epsrel=1e-12, limit=200)
                total += piece
                prev = target
            out[idx] = total
        return out.reshape(np.shape(a))

    def _inverse_transform(self, u):
        inner = self._mass_below_zero + np.asarray(u, dtype=float) * self._mass_above_zero
        x = self.mu + self.sigma * ndtri(inner)
        return np.maximum(x, 0.0) if np.ndim(x) else max(float(x), 0.0)


_FAMILIES: dict[str, type[DemandDistribution]] = {
    Uniform.family: Uniform,
    Exponential.family: Exponential,
    TruncatedNormal.family: TruncatedNormal,
}


def make_distribution(family: str, **params: float) -> DemandDistribution:
    """Build a demand distribution from a family name and its parameters."""
    try:
        cls = _FAMILIES[family]
    except KeyError:
        known = ", ".join(sorted(_FAMILIES))
        raise ValueError(f"unknown demand family {family!r}; expected one of: {known}") from None
    expected = {f.name for f in dataclasses.fields(cls)}  # type: ignore[arg-type]
    given = set(params)
    if given != expected:
        raise ValueError(
            f"demand family {family!r} takes parameters {sorted(expected)}, got {sorted(given)}"
        )
    return cls(**params)
