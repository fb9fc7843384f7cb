from __future__ import annotations

import enum
from dataclasses import dataclass

from ..model import Assignment


class Status(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    LIMIT = "limit-reached"


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    model: Assignment | None = None
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    flips: int = 0
    elapsed: float = 0.0
