"""Run an external SAT solver binary on a DIMACS file and check what it says."""
from __future__ import annotations

import os
import signal
import subprocess
import time
from dataclasses import dataclass
from pathlib import Path

from .io import read_dimacs
from .model import Formula

SAT, UNSAT, TIMEOUT, CRASH = "SAT", "UNSAT", "timeout", "crash"

# conventional solver exit codes: 10 satisfiable, 20 unsatisfiable
ACCEPTED_EXIT_CODES = {0, 10, 20}


@dataclass(frozen=True)
class ExternalResult:
    status: str
    elapsed: float
    model: tuple[int, ...] | None = None
    detail: str = ""
    returncode: int | None = None


def parse_solver_output(text: str) -> tuple[str | None, list[int] | None]:
    """Extract the ``s`` status line and any ``v`` model literals."""
    status = None
    model: list[int] | None = None
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip()
            if word == "SATISFIABLE":
                status = SAT
            elif word == "UNSATISFIABLE":
                status = UNSAT
            else:
                status = word
        elif line.startswith("v ") or line == "v":
            model = model or []
            model.extend(int(tok) for tok in line[1:].split() if tok != "0")
    return status, model


def model_satisfies(f: Formula, literals) -> bool:
    """Whether a (possibly partial) model makes every clause true. Contradictory models never do."""
    true = set(literals)
    if any(-lit in true for lit in true):
        return False
    return all(any(lit in true for lit in clause) for clause in f.clauses)


def run_external_solver(binary, cnf_path, timeout: float, formula: Formula | None = None) -> ExternalResult:
    binary, cnf_path = str(binary), str(cnf_path)
    if formula is None:
        formula = read_dimacs(Path(cnf_path).read_text())
    start = time.perf_counter()
    proc = subprocess.Popen(
        [binary, cnf_path], stdout=subprocess.PIPE, stderr=subprocess.PIPE,
        text=True, start_new_session=True)
    try:
        out, _err = proc.communicate(timeout=timeout)
    except subprocess.TimeoutExpired:
        # kill the whole group: wrapper scripts leave children holding the pipes
        try:
            os.killpg(proc.pid, signal.SIGKILL)
        except ProcessLookupError:
            pass
        proc.communicate()
        return ExternalResult(TIMEOUT, float(timeout), detail="wallclock limit")
    elapsed = time.perf_counter() - start

    if proc.returncode not in ACCEPTED_EXIT_CODES:
        return ExternalResult(CRASH, elapsed, detail=f"exit code {proc.returncode}",
                              returncode=proc.returncode)
    try:
        status, model = parse_solver_output(out)
    except ValueError:
        return ExternalResult(CRASH, elapsed, detail="unparseable model line",
                              returncode=proc.returncode)
    if status == UNSAT:
        return ExternalResult(UNSAT, elapsed, returncode=proc.returncode)
    if status != SAT:
        return ExternalResult(CRASH, elapsed, detail=f"no result line (got {status!r})",
                              returncode=proc.returncode)
    if model is None:
        return ExternalResult(SAT, elapsed, detail="no model", returncode=proc.returncode)
    if not model_satisfies(formula, model):
        return ExternalResult(CRASH, elapsed, model=tuple(model), detail="model-mismatch",
                              returncode=proc.returncode)
    return ExternalResult(SAT, elapsed, model=tuple(model), detail="model verified",
                          returncode=proc.returncode)
