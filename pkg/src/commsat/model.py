"""CNF formulas, truth assignments and clause evaluation.

Literals use the DIMACS convention: variable ``v`` is the positive literal
``v`` and its negation is ``-v``. Variables are numbered from 1.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, InvalidParameters

Clause = tuple[int, ...]


def make_clause(literals: Iterable[int]) -> Clause:
    """Build a 3-literal clause over three distinct variables."""
    clause = tuple(int(lit) for lit in literals)
    if len(clause) != 3:
        raise InvalidParameters(f"a clause needs exactly 3 literals, got {len(clause)}")
    if 0 in clause:
        raise InvalidParameters("0 is not a literal")
    if len({abs(lit) for lit in clause}) != 3:
        raise InvalidParameters(f"clause {clause} repeats a variable")
    return clause


@dataclass(frozen=True)
class Formula:
    """A CNF formula over variables ``1..n``.

    Clauses keep their literals in the order they were produced. Generated
    formulas are 3-SAT; other widths are admitted so that solver fixtures
    and foreign DIMACS files can be represented too.
    """

    n: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        clauses = tuple(tuple(c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.n < 0:
            raise InvalidParameters("variable count must be non-negative")
        for i, clause in enumerate(clauses):
            if not clause:
                raise InvalidParameters(f"clause {i} is empty")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n:
                    raise DomainError(f"clause {i}: literal {lit} outside 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def is_3sat(self) -> bool:
        return all(len(c) == 3 for c in self.clauses)

    def normalized(self) -> tuple[Clause, ...]:
        """Clauses with sorted literals, for duplicate detection only."""
        return tuple(tuple(sorted(c)) for c in self.clauses)


@dataclass(frozen=True)
class Assignment:
    """A total truth assignment; ``values[i]`` is the value of variable ``i + 1``."""

    values: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(bool(x) for x in self.values))

    @property
    def n(self) -> int:
        return len(self.values)

    def __getitem__(self, var: int) -> bool:
        if not 1 <= var <= len(self.values):
            raise DomainError(f"variable {var} outside 1..{len(self.values)}")
        return self.values[var - 1]

    def is_true(self, lit: int) -> bool:
        value = self[abs(lit)]
        return value if lit > 0 else not value

    def complement(self) -> Assignment:
        return Assignment(tuple(not x for x in self.values))

    def to_literals(self) -> list[int]:
        return [v if x else -v for v, x in enumerate(self.values, start=1)]

    @classmethod
    def from_literals(cls, literals: Iterable[int], n: int) -> Assignment:
        """Build from signed literals; every variable in 1..n must appear exactly once."""
        values: list[bool | None] = [None] * n
        for lit in literals:
            v = abs(lit)
            if lit == 0 or v > n:
                raise DomainError(f"literal {lit} outside 1..{n}")
            if values[v - 1] is not None:
                raise InvalidParameters(f"variable {v} assigned twice")
            values[v - 1] = lit > 0
        missing = [i + 1 for i, x in enumerate(values) if x is None]
        if missing:
            raise InvalidParameters(f"assignment is not total; missing {missing[:5]}")
        return cls(tuple(values))

    @classmethod
    def all_true(cls, n: int) -> Assignment:
        return cls((True,) * n)

    @classmethod
    def random(cls, n: int, rng: random.Random) -> Assignment:
        return cls(tuple(rng.random() < 0.5 for _ in range(n)))


def clause_type(clause: Sequence[int], a: Assignment) -> int:
    """Number of literals of ``clause`` that are true under ``a``."""
    return sum(1 for lit in clause if a.is_true(lit))


def evaluate(f: Formula, a: Assignment) -> int | None:
    """Index of the first clause falsified by ``a``, or None when ``a`` satisfies ``f``."""
    if a.n < f.n:
        raise DomainError(f"assignment covers {a.n} variables, formula has {f.n}")
    for i, clause in enumerate(f.clauses):
        if not any(a.is_true(lit) for lit in clause):
            return i
    return None


def is_satisfied(f: Formula, a: Assignment) -> bool:
    return evaluate(f, a) is None
