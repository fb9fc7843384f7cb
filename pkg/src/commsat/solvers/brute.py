"""Exhaustive enumeration over all 2**n assignments, for small formulas only."""
from __future__ import annotations

import numpy as np

from ..errors import TooLarge
from ..model import Assignment, Formula

MAX_VARS = 25
_CHUNK = 1 << 20


def _satisfying_mask(f: Formula, lo: int, hi: int) -> np.ndarray:
    # bit v-1 of the index is the value of variable v
    idx = np.arange(lo, hi, dtype=np.int64)
    ok = np.ones(hi - lo, dtype=bool)
    for clause in f.clauses:
        sat = np.zeros(hi - lo, dtype=bool)
        for lit in clause:
            bit = ((idx >> (abs(lit) - 1)) & 1).astype(bool)
            sat |= bit if lit > 0 else ~bit
        ok &= sat
    return ok


def _check(f: Formula):
    if f.n > MAX_VARS:
        raise TooLarge(f"n={f.n} exceeds the enumeration limit of {MAX_VARS}")


def brute_force_count(f: Formula) -> int:
    _check(f)
    total = 1 << f.n
    return sum(int(_satisfying_mask(f, lo, min(lo + _CHUNK, total)).sum())
               for lo in range(0, total, _CHUNK))


def brute_force_models(f: Formula) -> list[Assignment]:
    _check(f)
    total = 1 << f.n
    models = []
    for lo in range(0, total, _CHUNK):
        for i in np.flatnonzero(_satisfying_mask(f, lo, min(lo + _CHUNK, total))):
            k = lo + int(i)
            models.append(Assignment(tuple(bool((k >> b) & 1) for b in range(f.n))))
    return models
