"""Pure-Python DPLL, kept as the readable reference for the compiled search.

Must explore exactly the same tree as :func:`commsat.solvers.dpll.dpll_solve`;
the test suite compares decision and conflict counts between the two.
"""
from __future__ import annotations

import time

from ..model import Assignment, Formula, is_satisfied
from .outcome import SolveOutcome, Status


def dpll_solve_reference(f: Formula, max_decisions: int | None = None, max_time: float | None = None) -> SolveOutcome:
    start = time.perf_counter()
    n = f.n
    clauses = []
    for clause in f.clauses:
        lits = tuple(dict.fromkeys(clause))
        if any(-lit in lits for lit in lits):
            continue  # tautology
        clauses.append(lits)
    m = len(clauses)

    # literal l lives at index l + n
    occ: list[list[int]] = [[] for _ in range(2 * n + 1)]
    for ci, clause in enumerate(clauses):
        for lit in clause:
            occ[lit + n].append(ci)
    size = [len(c) for c in clauses]
    sat_count = [0] * m
    false_count = [0] * m
    active = [len(occ[i]) for i in range(2 * n + 1)]
    value = [0] * (n + 1)
    trail: list[int] = []
    num_sat = 0
    propagations = decisions = conflicts = 0

    pending: list[int] = [c[0] for c in clauses if len(c) == 1]
    pure_candidates: list[int] = list(range(1, n + 1))

    def assign(lit: int) -> bool:
        """Make ``lit`` true; queue new units. Returns False on conflict."""
        nonlocal num_sat
        value[abs(lit)] = 1 if lit > 0 else -1
        trail.append(lit)
        for ci in occ[lit + n]:
            sat_count[ci] += 1
            if sat_count[ci] == 1:
                num_sat += 1
                for other in clauses[ci]:
                    k = other + n
                    active[k] -= 1
                    if active[k] == 0:
                        pure_candidates.append(abs(other))
        ok = True
        for ci in occ[n - lit]:
            false_count[ci] += 1
            if sat_count[ci] == 0:
                remaining = size[ci] - false_count[ci]
                if remaining == 0:
                    ok = False
                elif remaining == 1:
                    for other in clauses[ci]:
                        if value[abs(other)] == 0:
                            pending.append(other)
                            break
        return ok

    def undo_to(mark: int) -> None:
        nonlocal num_sat
        while len(trail) > mark:
            lit = trail.pop()
            value[abs(lit)] = 0
            for ci in occ[lit + n]:
                sat_count[ci] -= 1
                if sat_count[ci] == 0:
                    num_sat -= 1
                    for other in clauses[ci]:
                        active[other + n] += 1
            for ci in occ[n - lit]:
                false_count[ci] -= 1

    def propagate() -> bool:
        nonlocal propagations
        while True:
            while pending:
                lit = pending.pop()
                v = value[abs(lit)]
                if v != 0:
                    if (v > 0) != (lit > 0):
                        pending.clear()
                        return False
                    continue
                propagations += 1
                if not assign(lit):
                    pending.clear()
                    return False
            # units exhausted; eliminate pure literals
            while pure_candidates and not pending:
                var = pure_candidates.pop()
                if value[var] != 0:
                    continue
                pos, neg = active[var + n], active[n - var]
                if pos and not neg:
                    pending.append(var)
                elif neg and not pos:
                    pending.append(-var)
            if not pending:
                return True

    def outcome(status, model=None):
        return SolveOutcome(status, model, decisions=decisions, propagations=propagations,
                            conflicts=conflicts, elapsed=time.perf_counter() - start)

    # stack of (decision literal, trail mark, already flipped)
    stack: list[tuple[int, int, bool]] = []
    ok = propagate()
    while True:
        if not ok:
            conflicts += 1
            pending.clear()
            while stack:
                lit, mark, flipped = stack.pop()
                undo_to(mark)
                pure_candidates.clear()
                if not flipped:
                    stack.append((-lit, mark, True))
                    ok = assign(-lit) and propagate()
                    break
            else:
                return outcome(Status.UNSAT)
            continue

        if num_sat == m:
            model = Assignment(tuple(value[v] >= 0 for v in range(1, n + 1)))
            assert is_satisfied(f, model)
            return outcome(Status.SAT, model)

        if max_decisions is not None and decisions >= max_decisions:
            return outcome(Status.LIMIT)
        if max_time is not None and decisions % 256 == 0 and time.perf_counter() - start > max_time:
            return outcome(Status.LIMIT)

        var = 1
        while value[var] != 0:
            var += 1
        decisions += 1
        stack.append((var, len(trail), False))
        ok = assign(var) and propagate()
