"""Partitioning variables into (possibly overlapping) communities."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import accumulate

from .errors import InvalidParameters


@dataclass(eq=False)
class CommunityPartition:
    """Community memberships of variables ``1..n`` over communities ``1..c``.

    ``home[v]`` is the community a variable was first dealt into; an
    inter-community variable additionally belongs to exactly one other
    community. Instances are not modified after construction.
    """

    n: int
    c: int
    c_to_vs: dict[int, frozenset[int]]
    v_to_cs: dict[int, frozenset[int]]
    home: dict[int, int]

    def __eq__(self, other):
        if not isinstance(other, CommunityPartition):
            return NotImplemented
        return (self.n, self.c, self.c_to_vs, self.v_to_cs, self.home) == (
            other.n, other.c, other.c_to_vs, other.v_to_cs, other.home)

    def is_inter(self, v: int) -> bool:
        return len(self.v_to_cs[v]) > 1

    @property
    def intra_variables(self) -> list[int]:
        return [v for v in sorted(self.v_to_cs) if len(self.v_to_cs[v]) == 1]

    @property
    def inter_variables(self) -> list[int]:
        return [v for v in sorted(self.v_to_cs) if len(self.v_to_cs[v]) > 1]

    def share_community(self, variables) -> bool:
        """True if some single community contains every variable given."""
        it = iter(variables)
        common = set(self.v_to_cs[next(it)])
        for v in it:
            common &= self.v_to_cs[v]
            if not common:
                return False
        return bool(common)

    @cached_property
    def weighted_members(self) -> dict[int, tuple[list[int], list[int]]]:
        """Per community: (members, multiplicity weights). Intra variables weigh 2, inter 1."""
        table = {}
        for comm in range(1, self.c + 1):
            members = sorted(self.c_to_vs[comm])
            weights = [1 if len(self.v_to_cs[v]) > 1 else 2 for v in members]
            table[comm] = (members, weights)
        return table

    @cached_property
    def cumulative_weights(self) -> dict[int, list[int]]:
        return {comm: list(accumulate(w)) for comm, (_, w) in self.weighted_members.items()}

    @classmethod
    def from_memberships(cls, memberships: dict[int, set[int]], home: dict[int, int], c: int):
        """Build both mappings from ``variable -> communities``; performs no validation."""
        c_to_vs: dict[int, set[int]] = {comm: set() for comm in range(1, c + 1)}
        for v, comms in memberships.items():
            for comm in comms:
                c_to_vs.setdefault(comm, set()).add(v)
        return cls(
            n=len(memberships),
            c=c,
            c_to_vs={k: frozenset(vs) for k, vs in c_to_vs.items()},
            v_to_cs={v: frozenset(cs) for v, cs in memberships.items()},
            home=dict(home),
        )


def inter_count(home_size: int, alpha: float) -> int:
    """Variables promoted out of a community of ``home_size``; round half to even."""
    # snap float noise such as 2.4999999999999996 before rounding
    return round(round(home_size * (1 - alpha), 9))


def partition_communities(n: int, c: int, alpha: float, rng: random.Random) -> CommunityPartition:
    """Deal ``n`` variables into ``c`` communities, then promote a ``1 - alpha``
    share of each community's home variables into one other random community.

    When ``c`` does not divide ``n`` the first ``n % c`` communities get one
    extra home variable.
    """
    if c < 1 or n < 1:
        raise InvalidParameters(f"n={n} and c={c} must be positive")
    if n < c:
        raise InvalidParameters(f"n={n} is smaller than the community count c={c}")
    if not 0.0 <= alpha <= 1.0:
        raise InvalidParameters(f"alpha={alpha} outside [0, 1]")
    if c == 1 and alpha < 1:
        raise InvalidParameters("alpha < 1 needs at least two communities")

    pool = list(range(1, n + 1))
    rng.shuffle(pool)
    base, extra = divmod(n, c)
    homes: dict[int, list[int]] = {}
    start = 0
    for comm in range(1, c + 1):
        size = base + (1 if comm <= extra else 0)
        homes[comm] = sorted(pool[start:start + size])
        start += size

    memberships = {v: {comm} for comm, vs in homes.items() for v in vs}
    home = {v: comm for comm, vs in homes.items() for v in vs}
    for comm in range(1, c + 1):
        promoted = rng.sample(homes[comm], inter_count(len(homes[comm]), alpha))
        others = [o for o in range(1, c + 1) if o != comm]
        for v in promoted:
            memberships[v].add(rng.choice(others))
    memberships = dict(sorted(memberships.items()))
    return CommunityPartition.from_memberships(memberships, home, c)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    intra: int = 0
    inter: int = 0
    expected_intra: float = 0.0
    expected_inter: float = 0.0

    @property
    def valid(self) -> bool:
        return not self.violations


def validate_partition(part: CommunityPartition, n: int, c: int, alpha: float) -> ValidationReport:
    report = ValidationReport(expected_intra=n * alpha, expected_inter=n * (1 - alpha))
    bad = report.violations
    if set(part.c_to_vs) - set(range(1, c + 1)):
        bad.append("unknown-community")
    if set(part.v_to_cs) != set(range(1, n + 1)):
        bad.append("variables-not-covered")

    for v, comms in part.v_to_cs.items():
        if len(comms) not in (1, 2):
            bad.append(f"membership-size:{v}")
        for comm in comms:
            if v not in part.c_to_vs.get(comm, ()):
                bad.append("inconsistent-mappings")
                break
        if part.home.get(v) not in comms:
            bad.append(f"home-not-member:{v}")
    for comm, vs in part.c_to_vs.items():
        if any(comm not in part.v_to_cs.get(v, ()) for v in vs):
            bad.append("inconsistent-mappings")
    if sorted(part.home) != list(range(1, n + 1)):
        bad.append("home-not-partition")

    # a repeated code is reported once
    report.violations = list(dict.fromkeys(bad))
    report.intra = sum(1 for comms in part.v_to_cs.values() if len(comms) == 1)
    report.inter = sum(1 for comms in part.v_to_cs.values() if len(comms) == 2)
    return report
