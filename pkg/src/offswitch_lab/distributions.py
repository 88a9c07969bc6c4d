"""Priors over the utility of a proposed action.

Two shapes cover everything the rest of the package needs: a finite list of
weighted atoms, and a uniform interval. Values are immutable after
construction and safe to share across threads; sampling takes an explicit
generator, so there is no hidden global state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditioningOnNull

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class Discrete:
    """Finite-support prior given as (value, weight) atoms.

    Atoms are canonicalized at construction: sorted by value, duplicate
    values merged, weights rescaled to sum to exactly 1. Input weights must
    be strictly positive and sum to 1 within ``WEIGHT_TOL``.
    """

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        if not atoms:
            raise ValueError("discrete prior needs at least one atom")
        merged: dict[float, float] = {}
        total = 0.0
        for value, weight in atoms:
            value, weight = float(value), float(weight)
            if not math.isfinite(value):
                raise ValueError(f"atom value must be finite, got {value!r}")
            if not (weight > 0.0 and math.isfinite(weight)):
                raise ValueError(f"atom weight must be strictly positive, got {weight!r}")
            merged[value] = merged.get(value, 0.0) + weight
            total += weight
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValueError(f"atom weights sum to {total!r}, expected 1 within {WEIGHT_TOL}")
        object.__setattr__(self, "atoms", tuple((v, merged[v] / total) for v in sorted(merged)))


@dataclass(frozen=True)
class Uniform:
    """Continuous uniform prior on [lo, hi] with lo < hi, both finite."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("uniform bounds must be finite")
        if not self.lo < self.hi:
            raise ValueError(f"uniform prior needs lo < hi, got [{self.lo}, {self.hi}]")


UtilityDistribution = Discrete | Uniform


def mean(d: UtilityDistribution) -> float:
    """Exact mean of the prior."""
    if isinstance(d, Uniform):
        return 0.5 * (d.lo + d.hi)
    return sum(v * w for v, w in d.atoms)


def prob_ge(d: UtilityDistribution, t: float) -> float:
    """P(U >= t). The boundary is inclusive, which matters for atoms at exactly t."""
    if not math.isfinite(t):
        raise ValueError(f"threshold must be finite, got {t!r}")
    if isinstance(d, Uniform):
        if t <= d.lo:
            return 1.0
        if t >= d.hi:
            return 0.0
        return (d.hi - t) / (d.hi - d.lo)
    # the canonical weights sum to 1 only up to rounding; never report > 1
    return min(1.0, sum(w for v, w in d.atoms if v >= t))


def cond_mean_ge(d: UtilityDistribution, t: float) -> float:
    """E[U | U >= t]. Raises ConditioningOnNull when P(U >= t) = 0."""
    p = prob_ge(d, t)
    if p <= 0.0:
        raise ConditioningOnNull(f"P(U >= {t}) = 0, conditional mean undefined")
    if isinstance(d, Uniform):
        return 0.5 * (max(t, d.lo) + d.hi)
    return sum(v * w for v, w in d.atoms if v >= t) / p


def expected_positive_part(d: UtilityDistribution) -> float:
    """E[max(U, 0)]: the payoff of deferring to an approve-iff-nonnegative responder."""
    p = prob_ge(d, 0.0)
    if p <= 0.0:
        return 0.0
    return p * cond_mean_ge(d, 0.0)


def sample(d: UtilityDistribution, rng: np.random.Generator) -> float:
    """One draw from the prior, deterministic given the generator state.

    The generator is numpy's ``Generator`` (PCG64 under ``default_rng``),
    which is seedable and splittable via ``numpy.random.SeedSequence`` and
    reproduces across platforms.
    """
    if isinstance(d, Uniform):
        return float(rng.uniform(d.lo, d.hi))
    u = rng.random()
    acc = 0.0
    for value, weight in d.atoms:
        acc += weight
        if u < acc:
            return value
    return d.atoms[-1][0]


def sample_array(d: UtilityDistribution, rng: np.random.Generator, n: int) -> np.ndarray:
    """Vectorized draws, used by the Monte-Carlo cross-checks."""
    if n < 0:
        raise ValueError("sample count must be non-negative")
    if isinstance(d, Uniform):
        return rng.uniform(d.lo, d.hi, size=n)
    values = np.array([v for v, _ in d.atoms])
    cum = np.cumsum([w for _, w in d.atoms])
    idx = np.searchsorted(cum, rng.random(n), side="right")
    return values[idx.clip(0, len(values) - 1)]
