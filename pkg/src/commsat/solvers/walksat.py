"""WalkSAT-style local search probe.

Each step picks a random falsified clause, then flips either a random
variable of it (probability ``noise``) or the variable with the smallest
break count, ties going to the lowest variable index. Never reports UNSAT.
"""
from __future__ import annotations

import hashlib
import time

import numpy as np
from numba import njit

from ..model import Assignment, Formula, is_satisfied
from .outcome import SolveOutcome, Status


def _kernel_seed(seed: int) -> int:
    # separate namespace: a generator seeded alike would otherwise hand us its planted solution
    digest = hashlib.blake2b(f"walksat:{seed}".encode(), digest_size=4).digest()
    return int.from_bytes(digest, "big")


@njit(cache=True)
def _walk(n, cl_start, cl_lits, occ_start, occ_list, noise, max_flips, seed, value):
    np.random.seed(seed)
    m = len(cl_start) - 1
    for v in range(1, n + 1):
        value[v] = np.random.random() < 0.5
    true_count = np.zeros(m, dtype=np.int64)
    unsat = np.empty(m, dtype=np.int64)
    where = np.full(m, -1, dtype=np.int64)
    n_unsat = 0
    for ci in range(m):
        for q in range(cl_start[ci], cl_start[ci + 1]):
            lit = cl_lits[q]
            if value[abs(lit)] == (lit > 0):
                true_count[ci] += 1
        if true_count[ci] == 0:
            where[ci] = n_unsat
            unsat[n_unsat] = ci
            n_unsat += 1

    flips = 0
    while n_unsat > 0:
        if flips >= max_flips:
            return flips, False
        ci = unsat[np.random.randint(0, n_unsat)]
        lo, hi = cl_start[ci], cl_start[ci + 1]
        if np.random.random() < noise:
            var = abs(cl_lits[lo + np.random.randint(0, hi - lo)])
        else:
            var = -1
            best = -1
            for q in range(lo, hi):
                cand = abs(cl_lits[q])
                true_lit = cand if value[cand] else -cand
                k = true_lit + n
                brk = 0
                for j in range(occ_start[k], occ_start[k + 1]):
                    if true_count[occ_list[j]] == 1:
                        brk += 1
                if best < 0 or brk < best or (brk == best and cand < var):
                    best = brk
                    var = cand

        old_true = var if value[var] else -var
        value[var] = not value[var]
        k = old_true + n
        for j in range(occ_start[k], occ_start[k + 1]):
            cj = occ_list[j]
            true_count[cj] -= 1
            if true_count[cj] == 0:
                where[cj] = n_unsat
                unsat[n_unsat] = cj
                n_unsat += 1
        k = n - old_true
        for j in range(occ_start[k], occ_start[k + 1]):
            cj = occ_list[j]
            true_count[cj] += 1
            if true_count[cj] == 1:
                i = where[cj]
                n_unsat -= 1
                last = unsat[n_unsat]
                unsat[i] = last
                where[last] = i
                where[cj] = -1
        flips += 1
    return flips, True


def _csr(f: Formula):
    n = f.n
    lengths = [len(c) for c in f.clauses]
    cl_start = np.zeros(f.m + 1, dtype=np.int64)
    if f.m:
        cl_start[1:] = np.cumsum(lengths)
    cl_lits = np.array([lit for c in f.clauses for lit in c], dtype=np.int64)
    order = np.argsort(cl_lits + n, kind="stable")
    clause_of = np.repeat(np.arange(f.m, dtype=np.int64), lengths)
    occ_list = clause_of[order]
    counts = np.bincount(cl_lits + n, minlength=2 * n + 1)
    occ_start = np.zeros(2 * n + 2, dtype=np.int64)
    occ_start[1:] = np.cumsum(counts)
    return cl_start, cl_lits, occ_start, occ_list


def walksat_probe(f: Formula, noise: float = 0.5, max_flips: int = 100_000, seed: int = 0) -> SolveOutcome:
    start = time.perf_counter()
    value = np.zeros(f.n + 1, dtype=np.bool_)
    flips, solved = _walk(f.n, *_csr(f), float(noise), int(max_flips), _kernel_seed(seed), value)
    elapsed = time.perf_counter() - start
    if not solved:
        return SolveOutcome(Status.LIMIT, flips=int(flips), elapsed=elapsed)
    model = Assignment(tuple(bool(x) for x in value[1:]))
    assert is_satisfied(f, model)
    return SolveOutcome(Status.SAT, model, flips=int(flips), elapsed=elapsed)
