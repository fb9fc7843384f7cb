"""Community-structured 3-SAT generation with a planted solution.

Each clause picks three variables either from one community (probability
``p``) or from three distinct communities, then sets polarities so that
exactly ``t`` literals are true under the planted solution, with ``t`` drawn
from a clause-type distribution that never yields 0.
"""
from __future__ import annotations

import hashlib
import random
from bisect import bisect_right
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import accumulate
from typing import Sequence

from .distribution import ClauseDistribution, beta_of, midpoint_params, sample_clause_type
from .errors import CommunityTooSmall, InfeasibleSelection, InvalidParameters
from .model import Assignment, Clause, Formula
from .partition import CommunityPartition, partition_communities

MAX_RESAMPLES = 10_000
MAX_REDRAWS = 100

INTRA = "intra"
INTER = "inter"


@dataclass(frozen=True)
class GeneratorParams:
    """Generator inputs. Defaults are the balanced mid-size setting (n=500, r=4.5, c=20)."""

    p: float = 0.3
    alpha: float = 1.0
    c: int = 20
    dist: ClauseDistribution = field(default_factory=lambda: midpoint_params(0.5))
    r: float = 4.5
    n: int = 500
    # None draws a fresh uniformly random solution from the seed
    solution: Assignment | None = None
    seed: int = 0
    no_duplicate_clauses: bool = False

    @classmethod
    def with_beta(cls, beta: float, **kwargs) -> GeneratorParams:
        return cls(dist=midpoint_params(beta), **kwargs)

    @property
    def m(self) -> int:
        return round(self.r * self.n)

    @property
    def beta(self) -> float:
        return beta_of(self.dist)

    def validate(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParameters(f"p={self.p} outside [0, 1]")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidParameters(f"alpha={self.alpha} outside [0, 1]")
        if self.n < 1 or self.c < 1:
            raise InvalidParameters(f"n={self.n} and c={self.c} must be positive")
        if self.r <= 0 or self.m < 1:
            raise InvalidParameters(f"r={self.r} gives no clauses for n={self.n}")
        if self.p < 1 and self.c < 3:
            raise InvalidParameters(
                f"c={self.c}: SelectThree requires c >= 3 whenever p < 1")
        if self.solution is not None and self.solution.n != self.n:
            raise InvalidParameters(
                f"planted solution covers {self.solution.n} variables, n={self.n}")


@dataclass(frozen=True)
class GeneratedInstance:
    formula: Formula
    solution: Assignment
    partition: CommunityPartition
    params: GeneratorParams
    provenance: tuple[tuple[str, int], ...]
    master_seed: int | None = None
    index: int | None = None

    @property
    def seed(self) -> int:
        return self.params.seed


def derive_seed(master_seed: int, index: int) -> int:
    """Stable 64-bit seed for instance ``index`` of a batch."""
    digest = hashlib.blake2b(f"{master_seed}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _draw_distinct(members: Sequence[int], cum: Sequence[int], rng: random.Random, k: int = 3) -> list[int]:
    # Same law as drawing uniformly from the multiplicity list and skipping repeats.
    total = cum[-1]
    hi = len(cum) - 1
    chosen: list[int] = []
    while len(chosen) < k:
        v = members[bisect_right(cum, rng.random() * total, 0, hi)]
        if v not in chosen:
            chosen.append(v)
    return chosen


def select_one(part: CommunityPartition, rng: random.Random, max_redraws: int = MAX_REDRAWS) -> list[int]:
    """Three distinct variables from a single uniformly chosen community."""
    for _ in range(max_redraws):
        comm = rng.randrange(part.c) + 1
        members, _ = part.weighted_members[comm]
        if len(members) >= 3:
            return _draw_distinct(members, part.cumulative_weights[comm], rng)
    raise CommunityTooSmall(
        f"no community with 3 variables found after {max_redraws} draws")


def select_three(
    part: CommunityPartition,
    rng: random.Random,
    max_resamples: int = MAX_RESAMPLES,
    max_redraws: int = MAX_REDRAWS,
) -> list[int]:
    """Three distinct variables drawn from three distinct communities, rejecting
    any triple that some single community contains.

    Rejected triples are redrawn from the pooled member list of the same
    target communities; after ``max_resamples`` failures the targets are
    redrawn.
    """
    if part.c < 3:
        raise InvalidParameters(f"c={part.c}: selecting from three communities needs c >= 3")
    for _ in range(max_redraws):
        targets = rng.sample(range(1, part.c + 1), 3)
        members: list[int] = []
        weights: list[int] = []
        for comm in targets:
            vs, ws = part.weighted_members[comm]
            members += vs
            weights += ws
        cum = list(accumulate(weights))
        for _ in range(max_resamples):
            vset = _draw_distinct(members, cum, rng)
            if not part.share_community(vset):
                return vset
    raise InfeasibleSelection(
        f"every drawn triple lay inside one community after {max_redraws} redraws")


def polarize(s: Assignment, vset: Sequence[int], true_vars) -> Clause:
    """Clause over ``vset`` whose literals are true under ``s`` exactly for ``true_vars``."""
    return tuple(v if (v in true_vars) == s[v] else -v for v in vset)


def set_polarity(s: Assignment, vset: Sequence[int], num: int, rng: random.Random) -> Clause:
    if num not in (1, 2, 3):
        raise InvalidParameters(f"num={num} must be 1, 2 or 3")
    if len(set(vset)) != 3:
        raise InvalidParameters(f"vset {vset} must hold 3 distinct variables")
    vset = list(vset)
    return polarize(s, vset, rng.sample(vset, num))


def generate_formula(params: GeneratorParams) -> GeneratedInstance:
    params.validate()
    rng = random.Random(params.seed)
    solution = params.solution
    if solution is None:
        solution = Assignment.random(params.n, rng)
    part = partition_communities(params.n, params.c, params.alpha, rng)
    if params.p > 0 and max(len(vs) for vs in part.c_to_vs.values()) < 3:
        raise InvalidParameters(
            f"p={params.p} needs a community of at least 3 variables (n={params.n}, c={params.c})")

    clauses: list[Clause] = []
    provenance: list[tuple[str, int]] = []
    seen: set[Clause] = set()
    for _ in range(params.m):
        for _attempt in range(MAX_RESAMPLES):
            if rng.random() < params.p:
                mode, vset = INTRA, select_one(part, rng)
            else:
                mode, vset = INTER, select_three(part, rng)
            kind = sample_clause_type(params.dist, rng)
            clause = set_polarity(solution, vset, kind, rng)
            if not params.no_duplicate_clauses:
                break
            key = tuple(sorted(clause))
            if key not in seen:
                seen.add(key)
                break
        else:
            raise InfeasibleSelection("could not draw a clause that is not a duplicate")
        clauses.append(clause)
        provenance.append((mode, kind))

    return GeneratedInstance(
        formula=Formula(params.n, tuple(clauses)),
        solution=solution,
        partition=part,
        params=params,
        provenance=tuple(provenance),
    )


def generate_one(params: GeneratorParams, master_seed: int, index: int) -> GeneratedInstance:
    """Instance ``index`` of the batch rooted at ``master_seed``."""
    inst = generate_formula(replace(params, seed=derive_seed(master_seed, index)))
    return replace(inst, master_seed=master_seed, index=index)


def _generate_job(job):
    return generate_one(*job)


def generate_batch(
    params: GeneratorParams, count: int, master_seed: int, workers: int = 1
) -> list[GeneratedInstance]:
    """Generate ``count`` instances; instance ``i`` uses ``derive_seed(master_seed, i)``.

    The result depends only on the arguments, never on ``workers``.
    """
    if count < 1:
        raise InvalidParameters(f"count={count} must be at least 1")
    jobs = [(params, master_seed, i) for i in range(count)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_generate_job, jobs))
    return [_generate_job(job) for job in jobs]


def uniform_random_formula(n: int, m: int, rng: random.Random) -> Formula:
    """Unplanted uniform random 3-SAT, used as a control."""
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), 3)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return Formula(n, tuple(clauses))
