"""Chronological DPLL with unit propagation and pure-literal elimination.

Branching is fixed: the lowest-index unassigned variable, TRUE first. No
learning, no restarts, so decision counts measure raw search difficulty and
are reproducible across machines.

The search runs in a compiled kernel that can be paused after a decision
budget and resumed, which is how wall-clock limits are enforced.
"""
from __future__ import annotations

import time

import numpy as np
from numba import njit

from ..model import Assignment, Formula, is_satisfied
from .outcome import SolveOutcome, Status

# slots of the kernel's scalar state vector
NUM_SAT, TRAIL, PEND, CAND, STACK, DECISIONS, PROPS, CONFLICTS, PHASE = range(9)
# PHASE values
NEED_PROPAGATE, CONSISTENT, IN_CONFLICT = 0, 1, 2
# kernel return codes
PAUSED, FOUND, REFUTED = 0, 1, 2

CHUNK = 50_000


@njit(cache=True)
def _assign(lit, n, cl_start, cl_lits, occ_start, occ_list, sat_count, false_count,
            active, value, trail, pending, cands, st):
    value[abs(lit)] = 1 if lit > 0 else -1
    trail[st[TRAIL]] = lit
    st[TRAIL] += 1
    k = lit + n
    for j in range(occ_start[k], occ_start[k + 1]):
        ci = occ_list[j]
        sat_count[ci] += 1
        if sat_count[ci] == 1:
            st[NUM_SAT] += 1
            for q in range(cl_start[ci], cl_start[ci + 1]):
                o = cl_lits[q] + n
                active[o] -= 1
                if active[o] == 0:
                    cands[st[CAND]] = abs(cl_lits[q])
                    st[CAND] += 1
    ok = True
    k = n - lit
    for j in range(occ_start[k], occ_start[k + 1]):
        ci = occ_list[j]
        false_count[ci] += 1
        if sat_count[ci] == 0:
            remaining = cl_start[ci + 1] - cl_start[ci] - false_count[ci]
            if remaining == 0:
                ok = False
            elif remaining == 1:
                for q in range(cl_start[ci], cl_start[ci + 1]):
                    if value[abs(cl_lits[q])] == 0:
                        pending[st[PEND]] = cl_lits[q]
                        st[PEND] += 1
                        break
    return ok


@njit(cache=True)
def _undo_to(mark, n, cl_start, cl_lits, occ_start, occ_list, sat_count, false_count,
             active, value, trail, st):
    while st[TRAIL] > mark:
        st[TRAIL] -= 1
        lit = trail[st[TRAIL]]
        value[abs(lit)] = 0
        k = lit + n
        for j in range(occ_start[k], occ_start[k + 1]):
            ci = occ_list[j]
            sat_count[ci] -= 1
            if sat_count[ci] == 0:
                st[NUM_SAT] -= 1
                for q in range(cl_start[ci], cl_start[ci + 1]):
                    active[cl_lits[q] + n] += 1
        k = n - lit
        for j in range(occ_start[k], occ_start[k + 1]):
            false_count[occ_list[j]] -= 1


@njit(cache=True)
def _propagate(n, cl_start, cl_lits, occ_start, occ_list, sat_count, false_count,
               active, value, trail, pending, cands, st):
    while True:
        while st[PEND] > 0:
            st[PEND] -= 1
            lit = pending[st[PEND]]
            v = value[abs(lit)]
            if v != 0:
                if (v > 0) != (lit > 0):
                    st[PEND] = 0
                    return False
                continue
            st[PROPS] += 1
            if not _assign(lit, n, cl_start, cl_lits, occ_start, occ_list, sat_count,
                           false_count, active, value, trail, pending, cands, st):
                st[PEND] = 0
                return False
        while st[CAND] > 0 and st[PEND] == 0:
            st[CAND] -= 1
            var = cands[st[CAND]]
            if value[var] != 0:
                continue
            pos = active[var + n]
            neg = active[n - var]
            if pos > 0 and neg == 0:
                pending[st[PEND]] = var
                st[PEND] += 1
            elif neg > 0 and pos == 0:
                pending[st[PEND]] = -var
                st[PEND] += 1
        if st[PEND] == 0:
            return True


@njit(cache=True)
def _search(n, m, cl_start, cl_lits, occ_start, occ_list, sat_count, false_count, active,
            value, trail, pending, cands, st_lit, st_mark, st_flip, st, decision_limit):
    if st[PHASE] == NEED_PROPAGATE:
        ok = _propagate(n, cl_start, cl_lits, occ_start, occ_list, sat_count, false_count,
                        active, value, trail, pending, cands, st)
        st[PHASE] = CONSISTENT if ok else IN_CONFLICT
    while True:
        if st[PHASE] == IN_CONFLICT:
            st[CONFLICTS] += 1
            st[PEND] = 0
            resumed = False
            while st[STACK] > 0:
                st[STACK] -= 1
                top = st[STACK]
                lit = st_lit[top]
                mark = st_mark[top]
                _undo_to(mark, n, cl_start, cl_lits, occ_start, occ_list, sat_count,
                         false_count, active, value, trail, st)
                # the restored state is a propagation fixpoint, so it holds no pure literal
                st[CAND] = 0
                if st_flip[top] == 0:
                    st_lit[top] = -lit
                    st_flip[top] = 1
                    st[STACK] += 1
                    ok = _assign(-lit, n, cl_start, cl_lits, occ_start, occ_list, sat_count,
                                 false_count, active, value, trail, pending, cands, st)
                    if ok:
                        ok = _propagate(n, cl_start, cl_lits, occ_start, occ_list, sat_count,
                                        false_count, active, value, trail, pending, cands, st)
                    st[PHASE] = CONSISTENT if ok else IN_CONFLICT
                    resumed = True
                    break
            if not resumed:
                return REFUTED
            continue

        if st[NUM_SAT] == m:
            return FOUND
        if st[DECISIONS] >= decision_limit:
            return PAUSED

        var = 1
        while value[var] != 0:
            var += 1
        st[DECISIONS] += 1
        top = st[STACK]
        st_lit[top] = var
        st_mark[top] = st[TRAIL]
        st_flip[top] = 0
        st[STACK] += 1
        ok = _assign(var, n, cl_start, cl_lits, occ_start, occ_list, sat_count, false_count,
                     active, value, trail, pending, cands, st)
        if ok:
            ok = _propagate(n, cl_start, cl_lits, occ_start, occ_list, sat_count, false_count,
                            active, value, trail, pending, cands, st)
        st[PHASE] = CONSISTENT if ok else IN_CONFLICT


def _prepare(f: Formula):
    n = f.n
    clauses = []
    for clause in f.clauses:
        lits = tuple(dict.fromkeys(clause))
        if any(-lit in lits for lit in lits):
            continue  # tautology
        clauses.append(lits)
    m = len(clauses)
    cl_start = np.zeros(m + 1, dtype=np.int64)
    cl_start[1:] = np.cumsum([len(c) for c in clauses]) if m else []
    cl_lits = np.array([lit for c in clauses for lit in c], dtype=np.int64)

    counts = np.zeros(2 * n + 2, dtype=np.int64)
    for lit in cl_lits:
        counts[lit + n + 1] += 1
    occ_start = np.cumsum(counts)
    fill = occ_start[:-1].copy()
    occ_list = np.zeros(len(cl_lits), dtype=np.int64)
    for ci, clause in enumerate(clauses):
        for lit in clause:
            occ_list[fill[lit + n]] = ci
            fill[lit + n] += 1
    active = np.diff(occ_start).astype(np.int64)

    pending = np.zeros(len(cl_lits) + m + 16, dtype=np.int64)
    units = [c[0] for c in clauses if len(c) == 1]
    pending[:len(units)] = units
    cands = np.zeros(3 * n + 16, dtype=np.int64)
    st = np.zeros(9, dtype=np.int64)
    st[PEND] = len(units)
    cands[:n] = np.arange(1, n + 1)
    st[CAND] = n
    return [n, m, cl_start, cl_lits, occ_start, occ_list,
            np.zeros(m, dtype=np.int64), np.zeros(m, dtype=np.int64), active,
            np.zeros(n + 1, dtype=np.int8), np.zeros(n + 1, dtype=np.int64),
            pending, cands,
            np.zeros(n + 1, dtype=np.int64), np.zeros(n + 1, dtype=np.int64),
            np.zeros(n + 1, dtype=np.int8), st]


def dpll_solve(f: Formula, max_decisions: int | None = None, max_time: float | None = None) -> SolveOutcome:
    start = time.perf_counter()
    args = _prepare(f)
    st, value = args[-1], args[9]
    while True:
        limit = st[DECISIONS] + CHUNK
        if max_decisions is not None:
            limit = min(limit, max_decisions)
        code = _search(*args, limit)
        elapsed = time.perf_counter() - start
        stats = dict(decisions=int(st[DECISIONS]), propagations=int(st[PROPS]),
                     conflicts=int(st[CONFLICTS]), elapsed=elapsed)
        if code == FOUND:
            model = Assignment(tuple(bool(x >= 0) for x in value[1:]))
            assert is_satisfied(f, model)
            return SolveOutcome(Status.SAT, model, **stats)
        if code == REFUTED:
            return SolveOutcome(Status.UNSAT, **stats)
        if max_decisions is not None and st[DECISIONS] >= max_decisions:
            return SolveOutcome(Status.LIMIT, **stats)
        if max_time is not None and elapsed > max_time:
            return SolveOutcome(Status.LIMIT, **stats)
