"""Variable incidence graph, modularity and per-instance statistics."""
from __future__ import annotations

import statistics
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .errors import DomainError
from .generator import GeneratedInstance
from .model import Formula, clause_type

PAIR_WEIGHT = 1 / 3


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted graph on nodes ``1..n``, keyed by ordered pairs ``(x, y)`` with ``x < y``."""

    n: int
    weights: Mapping[tuple[int, int], float]

    def __post_init__(self):
        for x, y in self.weights:
            if x >= y:
                raise ValueError(f"edge key {(x, y)} must satisfy x < y (no self-loops)")

    @property
    def total_weight(self) -> float:
        return sum(self.weights.values())

    def degrees(self) -> dict[int, float]:
        deg = {v: 0.0 for v in range(1, self.n + 1)}
        for (x, y), w in self.weights.items():
            deg[x] = deg.get(x, 0.0) + w
            deg[y] = deg.get(y, 0.0) + w
        return deg


def build_vig(f: Formula) -> WeightedGraph:
    """Each clause adds 1/3 to the edge of every pair of its variables."""
    counts: Counter[tuple[int, int]] = Counter()
    for clause in f.clauses:
        vs = sorted({abs(lit) for lit in clause})
        counts.update(combinations(vs, 2))
    return WeightedGraph(f.n, {pair: k * PAIR_WEIGHT for pair, k in counts.items()})


def modularity(g: WeightedGraph, part: Mapping[int, int]) -> float:
    """Newman modularity of a disjoint partition with weighted degrees.

    ``part`` maps each node to its community label.
    """
    total = g.total_weight
    if total == 0:
        return 0.0
    internal: Counter = Counter()
    degree: Counter = Counter()
    for (x, y), w in g.weights.items():
        try:
            cx, cy = part[x], part[y]
        except KeyError as exc:
            raise DomainError(f"node {exc.args[0]} has edges but no community") from None
        if cx == cy:
            internal[cx] += w
        degree[cx] += w
        degree[cy] += w
    total_degree = 2 * total
    return sum(internal[comm] / total - (degree[comm] / total_degree) ** 2 for comm in degree)


@dataclass(frozen=True)
class InstanceStats:
    n: int
    m: int
    type_counts: tuple[int, int, int]
    type0_count: int
    intra_clause_count: int
    intra_variable_count: int
    empirical_beta: float
    modularity_q: float
    degree_mean: float
    degree_cv: float

    @property
    def r(self) -> float:
        return self.m / self.n

    @property
    def intra_clause_fraction(self) -> float:
        return self.intra_clause_count / self.m if self.m else 0.0


def degree_stats(g: WeightedGraph) -> tuple[float, float]:
    """Mean and coefficient of variation of weighted degree over all nodes."""
    values = list(g.degrees().values())
    mean = statistics.fmean(values) if values else 0.0
    if mean == 0:
        return 0.0, 0.0
    return mean, statistics.pstdev(values) / mean


def instance_stats(inst: GeneratedInstance) -> InstanceStats:
    f, s, part = inst.formula, inst.solution, inst.partition
    counts = [0, 0, 0, 0]
    intra = 0
    for clause in f.clauses:
        counts[clause_type(clause, s)] += 1
        if part.share_community(abs(lit) for lit in clause):
            intra += 1
    m = f.m
    true_literals = counts[1] + 2 * counts[2] + 3 * counts[3]
    g = build_vig(f)
    mean, cv = degree_stats(g)
    return InstanceStats(
        n=f.n,
        m=m,
        type_counts=(counts[1], counts[2], counts[3]),
        type0_count=counts[0],
        intra_clause_count=intra,
        intra_variable_count=len(part.intra_variables),
        empirical_beta=true_literals / (3 * m) if m else 0.0,
        # inter-community variables count toward their home community
        modularity_q=modularity(g, part.home),
        degree_mean=mean,
        degree_cv=cv,
    )
