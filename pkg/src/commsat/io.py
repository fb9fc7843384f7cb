"""DIMACS CNF serialisation and the JSON metadata sidecar.

The sidecar records everything needed to reconstruct a generated instance
around its CNF file: parameters, seeds, community memberships, per-clause
provenance and (unless suppressed) the planted solution.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Any

from . import __version__
from .distribution import ClauseDistribution
from .errors import ParseError, SchemaVersionError
from .generator import GeneratedInstance, GeneratorParams
from .model import Assignment, Formula
from .partition import CommunityPartition

SCHEMA_VERSION = 1
GENERATOR = f"commsat {__version__}"


class NonThreeSatWarning(UserWarning):
    """A parsed DIMACS file holds clauses whose width is not 3."""


def _fmt(x: float) -> str:
    return repr(float(x))


def write_dimacs(inst: GeneratedInstance | Formula, include_solution_comment: bool = False) -> str:
    """One clause per line, after ``c`` comment lines describing the instance.

    The planted solution is written (as a ``c solution`` line) only on request.
    """
    lines = []
    if isinstance(inst, GeneratedInstance):
        p = inst.params
        lines.append(f"c generator {GENERATOR}")
        lines.append(
            f"c params p={_fmt(p.p)} alpha={_fmt(p.alpha)} c={p.c} p1={_fmt(p.dist.p1)} "
            f"p2={_fmt(p.dist.p2)} r={_fmt(p.r)} n={p.n}")
        lines.append(f"c seed {p.seed}")
        if include_solution_comment:
            lines.append("c solution " + " ".join(map(str, inst.solution.to_literals())))
        f = inst.formula
    else:
        f = inst
    lines.append(f"p cnf {f.n} {f.m}")
    lines.extend(" ".join(map(str, clause)) + " 0" for clause in f.clauses)
    return "\n".join(lines) + "\n"


def read_dimacs(text: str) -> Formula:
    """Parse strict DIMACS: every clause line must end with its ``0`` terminator."""
    header = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise ParseError("second header line", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if header[0] < 0 or header[1] < 0:
                raise ParseError(f"negative count in header {line!r}", lineno)
            continue
        if header is None:
            raise ParseError("clause before the 'p cnf' header", lineno)
        try:
            tokens = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        if tokens[-1] != 0:
            raise ParseError("clause is missing its 0 terminator", lineno)
        lits = tokens[:-1]
        if 0 in lits:
            raise ParseError("0 inside a clause", lineno)
        if not lits:
            raise ParseError("empty clause", lineno)
        for lit in lits:
            if abs(lit) > header[0]:
                raise ParseError(f"literal {lit} exceeds n={header[0]}", lineno)
        clauses.append(tuple(lits))
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if len(clauses) != header[1]:
        raise ParseError(f"header announces {header[1]} clauses, found {len(clauses)}")
    f = Formula(header[0], tuple(clauses))
    if not f.is_3sat:
        warnings.warn("formula has clauses whose width is not 3", NonThreeSatWarning, stacklevel=2)
    return f


def read_solution_comment(text: str) -> Assignment | None:
    """The planted solution from a ``c solution`` line, if the CNF carries one."""
    n = None
    for line in text.splitlines():
        if line.startswith("p cnf"):
            n = int(line.split()[2])
    for line in text.splitlines():
        if line.startswith("c solution "):
            return Assignment.from_literals(map(int, line.split()[2:]), n)
    return None


@dataclass(frozen=True)
class InstanceMetadata:
    params: dict[str, Any]
    seed: int
    master_seed: int | None
    index: int | None
    home: tuple[int, ...]
    memberships: tuple[tuple[int, ...], ...]
    solution: Assignment | None
    provenance: tuple[tuple[str, int], ...]
    generator: str = GENERATOR
    schema_version: int = SCHEMA_VERSION

    def partition(self) -> CommunityPartition:
        c = int(self.params["c"])
        memberships = {v: set(ms) for v, ms in enumerate(self.memberships, start=1)}
        home = {v: h for v, h in enumerate(self.home, start=1)}
        return CommunityPartition.from_memberships(memberships, home, c)

    def generator_params(self) -> GeneratorParams:
        p = self.params
        return GeneratorParams(
            p=p["p"], alpha=p["alpha"], c=p["c"],
            dist=ClauseDistribution(p["p1"], p["p2"], p["p3"]),
            r=p["r"], n=p["n"], seed=self.seed,
            no_duplicate_clauses=p.get("no_duplicate_clauses", False),
        )


def metadata_of(inst: GeneratedInstance, include_solution: bool = True) -> InstanceMetadata:
    p = inst.params
    part = inst.partition
    return InstanceMetadata(
        params={
            "p": p.p, "alpha": p.alpha, "c": p.c,
            "p1": p.dist.p1, "p2": p.dist.p2, "p3": p.dist.p3, "beta": p.beta,
            "r": p.r, "n": p.n, "m": inst.formula.m,
            "no_duplicate_clauses": p.no_duplicate_clauses,
        },
        seed=p.seed,
        master_seed=inst.master_seed,
        index=inst.index,
        home=tuple(part.home[v] for v in range(1, p.n + 1)),
        memberships=tuple(tuple(sorted(part.v_to_cs[v])) for v in range(1, p.n + 1)),
        solution=inst.solution if include_solution else None,
        provenance=inst.provenance,
    )


_MODE_CODE = {"intra": "I", "inter": "X"}
_CODE_MODE = {v: k for k, v in _MODE_CODE.items()}


def write_metadata(inst: GeneratedInstance | InstanceMetadata, include_solution: bool = True) -> str:
    """Serialise to JSON with one top-level key per line, keys sorted, so output is byte-stable."""
    meta = inst if isinstance(inst, InstanceMetadata) else metadata_of(inst, include_solution)
    doc: dict[str, Any] = {
        "schema_version": meta.schema_version,
        "generator": meta.generator,
        "params": meta.params,
        "seed": meta.seed,
        "master_seed": meta.master_seed,
        "index": meta.index,
        "home": list(meta.home),
        "memberships": [list(ms) for ms in meta.memberships],
        "provenance": {
            "modes": "".join(_MODE_CODE[mode] for mode, _ in meta.provenance),
            "types": "".join(str(t) for _, t in meta.provenance),
        },
    }
    if meta.solution is not None:
        doc["solution"] = meta.solution.to_literals()
    body = ",\n".join(
        f"  {json.dumps(key)}: {json.dumps(doc[key], sort_keys=True, separators=(',', ':'))}"
        for key in sorted(doc))
    return "{\n" + body + "\n}\n"


def read_metadata(text: str) -> InstanceMetadata:
    doc = json.loads(text)
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"metadata schema version {version!r}; this reader understands {SCHEMA_VERSION}")
    modes, types = doc["provenance"]["modes"], doc["provenance"]["types"]
    n = doc["params"]["n"]
    solution = doc.get("solution")
    return InstanceMetadata(
        params=doc["params"],
        seed=doc["seed"],
        master_seed=doc["master_seed"],
        index=doc["index"],
        home=tuple(doc["home"]),
        memberships=tuple(tuple(ms) for ms in doc["memberships"]),
        solution=None if solution is None else Assignment.from_literals(solution, n),
        provenance=tuple((_CODE_MODE[m], int(t)) for m, t in zip(modes, types)),
        generator=doc["generator"],
        schema_version=version,
    )


def load_instance(cnf_text: str, meta_text: str) -> GeneratedInstance:
    """Rebuild a generated instance from its CNF and sidecar; the sidecar must hold the solution."""
    meta = read_metadata(meta_text)
    if meta.solution is None:
        raise ValueError("metadata carries no solution")
    return GeneratedInstance(
        formula=read_dimacs(cnf_text),
        solution=meta.solution,
        partition=meta.partition(),
        params=meta.generator_params(),
        provenance=meta.provenance,
        master_seed=meta.master_seed,
        index=meta.index,
    )
