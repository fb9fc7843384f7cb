"""Clause-type distributions.

A clause of type ``t`` has exactly ``t`` literals that are true under the
planted solution. Type 0 is never produced, which is what keeps the planted
solution valid.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InvalidParameters

TOL = 1e-12


@dataclass(frozen=True)
class ClauseDistribution:
    """Probabilities of generating a Type 1, Type 2 and Type 3 clause."""

    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        for name in ("p1", "p2", "p3"):
            value = getattr(self, name)
            if value < -TOL:
                raise InvalidParameters(f"{name}={value} is negative")
        if abs(self.p1 + self.p2 + self.p3 - 1.0) > TOL:
            raise InvalidParameters(
                f"type probabilities sum to {self.p1 + self.p2 + self.p3}, not 1"
            )

    @classmethod
    def from_p1p2(cls, p1: float, p2: float) -> ClauseDistribution:
        """Build from the two free parameters; rejects ``p1 + p2 > 1`` rather than renormalising."""
        if p1 < 0 or p2 < 0:
            raise InvalidParameters(f"p1={p1}, p2={p2} must be non-negative")
        if p1 + p2 > 1 + TOL:
            raise InvalidParameters(f"p1 + p2 = {p1 + p2} exceeds 1")
        return cls(p1, p2, max(0.0, 1.0 - p1 - p2))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p1, self.p2, self.p3)


def beta_of(d: ClauseDistribution) -> float:
    """Expected fraction of true literals under the planted solution."""
    return (d.p1 + 2 * d.p2 + 3 * d.p3) / 3


def midpoint_params(beta: float) -> ClauseDistribution:
    """Resolve a true-literal ratio to the midpoint of its feasible (p1, p2) segment.

    All (p1, p2) with ``2*p1 + p2 = 3*(1 - beta)``, ``p1, p2 >= 0`` and
    ``p1 + p2 <= 1`` share the same beta. Parametrised by p1 that segment is
    ``[max(0, t - 1), t / 2]`` with ``t = 3*(1 - beta)``.
    """
    if not (1 / 3 - TOL <= beta <= 1 + TOL):
        raise InvalidParameters(f"beta={beta} outside [1/3, 1]")
    t = 3 * (1 - beta)
    lo, hi = max(0.0, t - 1), t / 2
    p1 = (lo + hi) / 2
    p2 = max(0.0, t - 2 * p1)
    return ClauseDistribution.from_p1p2(p1, p2)


def qhidden_params(q: float) -> ClauseDistribution:
    if q <= 0:
        raise InvalidParameters(f"q={q} must be positive")
    # (1 + q)^3 - 1 expanded, which avoids cancellation for small q
    denom = 3 * q + 3 * q * q + q ** 3
    return ClauseDistribution(3 * q / denom, 3 * q * q / denom, q ** 3 / denom)


PRESETS = {
    # uniform polarities, Type 0 rejected: weights 3:3:1 over types 1..3
    "one-hidden": ClauseDistribution(3 / 7, 3 / 7, 1 / 7),
    # Type 0 and Type 3 both rejected
    "two-hidden": ClauseDistribution(0.5, 0.5, 0.0),
}


def preset_params(name: str) -> ClauseDistribution:
    try:
        return PRESETS[name]
    except KeyError:
        raise InvalidParameters(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}"
        ) from None


def type_for_draw(d: ClauseDistribution, u: float) -> int:
    """Map a uniform draw on [0, 1) to a clause type, thresholds in order p1, p1 + p2."""
    if u < d.p1:
        return 1
    if u < d.p1 + d.p2:
        return 2
    return 3


def sample_clause_type(d: ClauseDistribution, rng: random.Random) -> int:
    return type_for_draw(d, rng.random())
