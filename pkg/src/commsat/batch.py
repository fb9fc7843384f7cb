"""Parameter-grid experiments: generate, measure, optionally solve, write CSV.

Runs are resumable. Every instance has a deterministic file name, and an
instance whose CNF and sidecar already exist is read back instead of being
regenerated; solver results are cached the same way.
"""
from __future__ import annotations

import csv
import itertools
import json
import logging
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import instance_stats
from .generator import GeneratorParams, derive_seed, generate_one
from .io import load_instance, write_dimacs, write_metadata

log = logging.getLogger(__name__)

DEFAULTS = {"p": 0.3, "alpha": 1.0, "beta": 0.5, "r": 4.5, "n": 500, "c": 20}
AXES = ("p", "alpha", "beta", "r", "n", "c")


def _steps(lo, hi, step):
    count = round((hi - lo) / step)
    return [round(lo + k * step, 10) for k in range(count + 1)]


GRID_VALUES = {
    "p": _steps(0.0, 1.0, 0.1),
    "alpha": _steps(0.0, 1.0, 0.1),
    "beta": [0.35, 0.40, 0.45, 0.50, 0.65, 0.80, 0.95],
    "r": _steps(3.0, 6.0, 0.1),
    "n": list(range(300, 1601, 50)),
    "c": list(range(3, 31)),
}

# the published sweep designs: which axes vary, the rest stay at DEFAULTS
SWEEPS = {
    "p-beta": ("p", "beta"),
    "p-alpha": ("p", "alpha"),
    "p": ("p",),
    "alpha": ("alpha",),
    "beta": ("beta",),
    "r": ("r",),
    "n": ("n",),
    "c": ("c",),
}

INSTANCE_FIELDS = [
    "setting", "index", "master_seed", "seed", "p", "alpha", "beta", "p1", "p2", "r", "n", "c", "m",
    "type1", "type2", "type3", "type0", "intra_clause_count", "intra_clause_fraction",
    "intra_variable_count", "empirical_beta", "modularity_q", "degree_mean", "degree_cv",
    "solver", "status", "decisions", "conflicts", "flips", "error", "file",
]
STAT_FIELDS = [
    "m", "type1", "type2", "type3", "type0", "intra_clause_count", "intra_clause_fraction",
    "intra_variable_count", "empirical_beta", "modularity_q", "degree_mean", "degree_cv",
    "decisions", "conflicts", "flips",
]
SETTING_FIELDS = ["setting", "p", "alpha", "beta", "r", "n", "c"]


@dataclass
class ExperimentGrid:
    p: list[float] = field(default_factory=lambda: [DEFAULTS["p"]])
    alpha: list[float] = field(default_factory=lambda: [DEFAULTS["alpha"]])
    beta: list[float] = field(default_factory=lambda: [DEFAULTS["beta"]])
    r: list[float] = field(default_factory=lambda: [DEFAULTS["r"]])
    n: list[int] = field(default_factory=lambda: [DEFAULTS["n"]])
    c: list[int] = field(default_factory=lambda: [DEFAULTS["c"]])
    per_setting: int = 50
    master_seed: int = 0
    outdir: Path = Path(".")

    @classmethod
    def sweep(cls, name: str, **kwargs) -> ExperimentGrid:
        axes = {axis: list(GRID_VALUES[axis]) for axis in SWEEPS[name]}
        return cls(**axes, **kwargs)

    def settings(self) -> list[dict]:
        return [dict(zip(AXES, combo))
                for combo in itertools.product(self.p, self.alpha, self.beta, self.r, self.n, self.c)]

    @property
    def total(self) -> int:
        return len(self.settings()) * self.per_setting


def setting_key(setting: dict) -> str:
    s = setting
    return f"p{s['p']:g}_a{s['alpha']:g}_b{s['beta']:g}_r{s['r']:g}_n{s['n']}_c{s['c']}"


def instance_stem(setting: dict, index: int, master_seed: int) -> str:
    return f"{setting_key(setting)}__m{master_seed}_i{index:03d}"


def params_for(setting: dict) -> GeneratorParams:
    return GeneratorParams.with_beta(
        setting["beta"], p=setting["p"], alpha=setting["alpha"], c=int(setting["c"]),
        r=setting["r"], n=int(setting["n"]))


@dataclass(frozen=True)
class SolverSpec:
    name: str  # "dpll" or "walksat"
    max_decisions: int | None = None
    max_time: float | None = None
    max_flips: int = 1_000_000
    noise: float = 0.5


def _solve(spec: SolverSpec, formula, seed: int) -> dict:
    from .solvers import dpll_solve, walksat_probe

    if spec.name == "dpll":
        out = dpll_solve(formula, max_decisions=spec.max_decisions, max_time=spec.max_time)
    elif spec.name == "walksat":
        out = walksat_probe(formula, noise=spec.noise, max_flips=spec.max_flips, seed=seed)
    else:
        raise ValueError(f"unknown solver {spec.name!r}")
    return {"solver": spec.name, "status": out.status.value, "decisions": out.decisions,
            "conflicts": out.conflicts, "flips": out.flips, "elapsed": out.elapsed}


def run_instance(setting: dict, index: int, master_seed: int, outdir: Path,
                 solver: SolverSpec | None = None) -> dict:
    """Produce (or reload) one instance and return its CSV row. Errors land in the row."""
    stem = instance_stem(setting, index, master_seed)
    cnf_path = outdir / f"{stem}.cnf"
    meta_path = outdir / f"{stem}.meta.json"
    row = {key: setting[key] for key in SETTING_FIELDS if key != "setting"}
    row.update(setting=setting_key(setting), index=index, master_seed=master_seed,
               seed=derive_seed(master_seed, index), file=cnf_path.name, error="")
    try:
        if cnf_path.exists() and meta_path.exists():
            inst = load_instance(cnf_path.read_text(), meta_path.read_text())
        else:
            inst = generate_one(params_for(setting), master_seed, index)
            cnf_path.write_text(write_dimacs(inst))
            meta_path.write_text(write_metadata(inst))
        stats = instance_stats(inst)
        row.update(
            p1=inst.params.dist.p1, p2=inst.params.dist.p2, m=stats.m,
            type1=stats.type_counts[0], type2=stats.type_counts[1], type3=stats.type_counts[2],
            type0=stats.type0_count, intra_clause_count=stats.intra_clause_count,
            intra_clause_fraction=stats.intra_clause_fraction,
            intra_variable_count=stats.intra_variable_count, empirical_beta=stats.empirical_beta,
            modularity_q=stats.modularity_q, degree_mean=stats.degree_mean,
            degree_cv=stats.degree_cv,
        )
        if solver is not None:
            solve_path = outdir / f"{stem}.{solver.name}.json"
            if solve_path.exists():
                result = json.loads(solve_path.read_text())
            else:
                result = _solve(solver, inst.formula, row["seed"])
                solve_path.write_text(json.dumps(result, sort_keys=True) + "\n")
            row.update({k: result[k] for k in ("solver", "status", "decisions", "conflicts", "flips")})
    except Exception as exc:  # recorded per row; the batch keeps going
        log.warning("instance %s failed: %s", stem, exc)
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _job(args):
    return run_instance(*args)


def aggregate(rows: list[dict]) -> list[dict]:
    """One row per setting: the setting, a count, and mean/std of every numeric statistic."""
    groups: dict[str, list[dict]] = {}
    for row in rows:
        groups.setdefault(row["setting"], []).append(row)
    out = []
    for key, members in groups.items():
        agg = {k: members[0][k] for k in SETTING_FIELDS}
        good = [r for r in members if not r.get("error")]
        agg["count"] = len(good)
        agg["errors"] = len(members) - len(good)
        for stat in STAT_FIELDS:
            values = [float(r[stat]) for r in good if r.get(stat) not in (None, "")]
            agg[f"{stat}_mean"] = statistics.fmean(values) if values else ""
            agg[f"{stat}_std"] = statistics.stdev(values) if len(values) > 1 else (0.0 if values else "")
        out.append(agg)
    return out


def aggregate_fields() -> list[str]:
    return SETTING_FIELDS + ["count", "errors"] + [
        f"{stat}_{kind}" for stat in STAT_FIELDS for kind in ("mean", "std")]


def _write_csv(path: Path, fields: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(row.get(k, "")) for k in fields})


def _cell(value):
    return repr(value) if isinstance(value, float) else value


def read_instance_csv(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def run_batch(grid: ExperimentGrid, workers: int = 1, solver: SolverSpec | None = None) -> tuple[Path, Path]:
    """Run the whole grid; returns the paths of the instance and aggregate CSVs."""
    outdir = Path(grid.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    jobs = [(setting, i, grid.master_seed, outdir, solver)
            for setting in grid.settings() for i in range(grid.per_setting)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_job, jobs, chunksize=4))
    else:
        rows = [_job(job) for job in jobs]

    instances_csv = outdir / "instances.csv"
    aggregate_csv = outdir / "aggregate.csv"
    _write_csv(instances_csv, INSTANCE_FIELDS, rows)
    # aggregate from the rows as written, so re-aggregating the CSV reproduces it
    _write_csv(aggregate_csv, aggregate_fields(), aggregate(read_instance_csv(instances_csv)))
    return instances_csv, aggregate_csv
