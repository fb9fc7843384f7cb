"""Command line interface: ``commsat generate|batch|verify|analyze|solve|run-ext``.

Exit codes: 0 success, 1 usage or parameter error, 2 verification failure,
3 solver limit reached.
"""
from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

from .analysis import instance_stats
from .batch import DEFAULTS, SWEEPS, ExperimentGrid, SolverSpec, run_batch
from .distribution import ClauseDistribution, midpoint_params, preset_params, qhidden_params
from .errors import CommsatError
from .generator import GeneratorParams, generate_formula
from .io import read_dimacs, read_metadata, write_dimacs, write_metadata, load_instance
from .model import clause_type, evaluate
from .runner import CRASH, SAT, TIMEOUT, UNSAT, run_external_solver

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_LIMIT = 0, 1, 2, 3
OUTDIR_ENV = "COMMSAT_OUTDIR"


def _default_outdir() -> Path:
    return Path(os.environ.get(OUTDIR_ENV, "."))


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _resolve_distribution(args) -> ClauseDistribution:
    chosen = [name for name in ("beta", "p1", "q", "preset") if getattr(args, name) is not None]
    if len(chosen) > 1:
        raise CommsatError(f"choose one of --beta, --p1/--p2, --q, --preset (got {chosen})")
    if args.p1 is not None or args.p2 is not None:
        if args.p1 is None or args.p2 is None:
            raise CommsatError("--p1 and --p2 go together")
        return ClauseDistribution.from_p1p2(args.p1, args.p2)
    if args.q is not None:
        return qhidden_params(args.q)
    if args.preset is not None:
        return preset_params(args.preset)
    return midpoint_params(args.beta if args.beta is not None else DEFAULTS["beta"])


def _print_stats(stats, out=None):
    out = out or sys.stdout
    print(f"n={stats.n} m={stats.m} r={stats.r:.4g}", file=out)
    t1, t2, t3 = stats.type_counts
    print(f"clause types: type1={t1} type2={t2} type3={t3} type0={stats.type0_count}", file=out)
    print(f"empirical beta={stats.empirical_beta:.4f}", file=out)
    print(f"intra-community clauses={stats.intra_clause_count} "
          f"({stats.intra_clause_fraction:.4f}); intra-community variables={stats.intra_variable_count}",
          file=out)
    print(f"modularity Q={stats.modularity_q:.4f}; degree mean={stats.degree_mean:.4f} "
          f"cv={stats.degree_cv:.4f}", file=out)


def cmd_generate(args) -> int:
    params = GeneratorParams(
        p=args.p, alpha=args.alpha, c=args.c, dist=_resolve_distribution(args), r=args.r, n=args.n,
        seed=args.seed, no_duplicate_clauses=args.no_duplicate_clauses)
    inst = generate_formula(params)
    outdir = Path(args.outdir) if args.outdir else _default_outdir()
    outdir.mkdir(parents=True, exist_ok=True)
    stem = args.name or f"commsat_n{params.n}_seed{params.seed}"
    cnf_path = outdir / f"{stem}.cnf"
    meta_path = outdir / f"{stem}.meta.json"
    cnf_path.write_text(write_dimacs(inst, include_solution_comment=args.solution_in_cnf))
    meta_path.write_text(write_metadata(inst, include_solution=not args.hide_solution))
    print(f"wrote {cnf_path} and {meta_path}")
    _print_stats(instance_stats(inst))
    return EXIT_OK


def cmd_batch(args) -> int:
    outdir = Path(args.outdir) if args.outdir else _default_outdir()
    grid = ExperimentGrid.sweep(args.sweep) if args.sweep else ExperimentGrid()
    for axis, parse in (("p", _floats), ("alpha", _floats), ("beta", _floats),
                        ("r", _floats), ("n", _ints), ("c", _ints)):
        text = getattr(args, axis)
        if text is not None:
            setattr(grid, axis, parse(text))
    grid.per_setting = args.per_setting
    grid.master_seed = args.seed
    grid.outdir = outdir
    print(f"{len(grid.settings())} settings x {grid.per_setting} instances = {grid.total} instances")
    if args.dry_run:
        return EXIT_OK
    solver = None
    if args.solver != "none":
        solver = SolverSpec(args.solver, max_decisions=args.max_decisions, max_time=args.max_time,
                            max_flips=args.max_flips, noise=args.noise)
    instances_csv, aggregate_csv = run_batch(grid, workers=args.workers, solver=solver)
    print(f"wrote {instances_csv} and {aggregate_csv}")
    return EXIT_OK


def cmd_verify(args) -> int:
    formula = read_dimacs(Path(args.cnf).read_text())
    meta = read_metadata(Path(args.meta).read_text())
    if meta.solution is None:
        print("NOT-VERIFIABLE: metadata carries no solution")
        return EXIT_VERIFY
    histogram = [0, 0, 0, 0]
    for clause in formula.clauses:
        histogram[min(clause_type(clause, meta.solution), 3)] += 1
    print("clause types: " + " ".join(f"type{t}={k}" for t, k in enumerate(histogram)))
    bad = evaluate(formula, meta.solution)
    if bad is not None:
        print(f"FAIL: clause {bad} {formula.clauses[bad]} is false under the planted solution")
        return EXIT_VERIFY
    print(f"PASS: planted solution satisfies all {formula.m} clauses; type0={histogram[0]}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    inst = load_instance(Path(args.cnf).read_text(), Path(args.meta).read_text())
    stats = instance_stats(inst)
    _print_stats(stats)
    if args.csv:
        row = {"file": args.cnf, "n": stats.n, "m": stats.m,
               "type1": stats.type_counts[0], "type2": stats.type_counts[1],
               "type3": stats.type_counts[2], "type0": stats.type0_count,
               "intra_clause_count": stats.intra_clause_count,
               "intra_variable_count": stats.intra_variable_count,
               "empirical_beta": stats.empirical_beta, "modularity_q": stats.modularity_q,
               "degree_mean": stats.degree_mean, "degree_cv": stats.degree_cv}
        _append_csv(Path(args.csv), row)
    return EXIT_OK


def _append_csv(path: Path, row: dict) -> None:
    new = not path.exists()
    with open(path, "a", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(row), lineterminator="\n")
        if new:
            writer.writeheader()
        writer.writerow(row)


def cmd_solve(args) -> int:
    from .solvers import Status, dpll_solve, walksat_probe

    formula = read_dimacs(Path(args.cnf).read_text())
    if args.solver == "dpll":
        out = dpll_solve(formula, max_decisions=args.max_decisions, max_time=args.max_time)
    else:
        out = walksat_probe(formula, noise=args.noise, max_flips=args.max_flips, seed=args.seed)
    words = {Status.SAT: "SATISFIABLE", Status.UNSAT: "UNSATISFIABLE", Status.LIMIT: "UNKNOWN"}
    print(f"s {words[out.status]}")
    if out.model is not None and args.print_model:
        print("v " + " ".join(map(str, out.model.to_literals())) + " 0")
    print(f"c solver={args.solver} status={out.status.value} decisions={out.decisions} "
          f"propagations={out.propagations} conflicts={out.conflicts} flips={out.flips} "
          f"elapsed={out.elapsed:.3f}")
    if args.csv:
        _append_csv(Path(args.csv), {
            "file": args.cnf, "solver": args.solver, "status": out.status.value,
            "decisions": out.decisions, "propagations": out.propagations,
            "conflicts": out.conflicts, "flips": out.flips, "elapsed": out.elapsed})
    return EXIT_LIMIT if out.status is Status.LIMIT else EXIT_OK


def cmd_run_ext(args) -> int:
    result = run_external_solver(args.binary, args.cnf, args.timeout)
    detail = f" ({result.detail})" if result.detail else ""
    print(f"{result.status}{detail} elapsed={result.elapsed:.3f}")
    if result.status in (SAT, UNSAT):
        return EXIT_OK
    if result.status == TIMEOUT:
        return EXIT_LIMIT
    assert result.status == CRASH
    return EXIT_VERIFY


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="commsat", description="Community-structured 3-SAT with a planted solution.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate one instance (CNF + metadata sidecar)")
    gen.add_argument("--p", type=float, default=DEFAULTS["p"], help="intra-community clause ratio")
    gen.add_argument("--alpha", type=float, default=DEFAULTS["alpha"],
                     help="intra-community variable ratio")
    gen.add_argument("--c", type=int, default=DEFAULTS["c"], help="number of communities")
    gen.add_argument("--beta", type=float, help="true-literal ratio (default 0.5)")
    gen.add_argument("--p1", type=float, help="Type 1 probability (with --p2)")
    gen.add_argument("--p2", type=float, help="Type 2 probability (with --p1)")
    gen.add_argument("--q", type=float, help="q-hidden clause distribution")
    gen.add_argument("--preset", choices=["one-hidden", "two-hidden"])
    gen.add_argument("--r", type=float, default=DEFAULTS["r"], help="clause/variable ratio")
    gen.add_argument("--n", type=int, default=DEFAULTS["n"], help="number of variables")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--outdir", help=f"output directory (default ${OUTDIR_ENV} or .)")
    gen.add_argument("--name", help="file stem")
    gen.add_argument("--solution-in-cnf", action="store_true",
                     help="also write the planted solution as a CNF comment")
    gen.add_argument("--hide-solution", action="store_true",
                     help="omit the planted solution from the metadata")
    gen.add_argument("--no-duplicate-clauses", action="store_true")
    gen.set_defaults(func=cmd_generate)

    bat = sub.add_parser("batch", help="generate and measure a parameter grid")
    bat.add_argument("--sweep", choices=sorted(SWEEPS), help="a published sweep design")
    for axis in ("p", "alpha", "beta", "r", "n", "c"):
        bat.add_argument(f"--{axis}", help=f"comma-separated {axis} values")
    bat.add_argument("--per-setting", type=int, default=50)
    bat.add_argument("--seed", type=int, default=0, help="master seed")
    bat.add_argument("--outdir")
    bat.add_argument("--workers", type=int, default=1)
    bat.add_argument("--solver", choices=["none", "dpll", "walksat"], default="none")
    bat.add_argument("--max-decisions", type=int)
    bat.add_argument("--max-time", type=float)
    bat.add_argument("--max-flips", type=int, default=1_000_000)
    bat.add_argument("--noise", type=float, default=0.5)
    bat.add_argument("--dry-run", action="store_true", help="only report the instance count")
    bat.set_defaults(func=cmd_batch)

    ver = sub.add_parser("verify", help="check a CNF against the solution in its metadata")
    ver.add_argument("cnf")
    ver.add_argument("meta")
    ver.set_defaults(func=cmd_verify)

    ana = sub.add_parser("analyze", help="community and clause statistics of an instance")
    ana.add_argument("cnf")
    ana.add_argument("meta")
    ana.add_argument("--csv", help="append a stats row to this CSV")
    ana.set_defaults(func=cmd_analyze)

    sol = sub.add_parser("solve", help="run an internal solver")
    sol.add_argument("cnf")
    sol.add_argument("--solver", choices=["dpll", "walksat"], default="dpll")
    sol.add_argument("--max-decisions", type=int)
    sol.add_argument("--max-time", type=float)
    sol.add_argument("--max-flips", type=int, default=1_000_000)
    sol.add_argument("--noise", type=float, default=0.5)
    sol.add_argument("--seed", type=int, default=0)
    sol.add_argument("--print-model", action="store_true")
    sol.add_argument("--csv", help="append a result row to this CSV")
    sol.set_defaults(func=cmd_solve)

    ext = sub.add_parser("run-ext", help="run an external solver binary with a wallclock limit")
    ext.add_argument("binary")
    ext.add_argument("cnf")
    ext.add_argument("--timeout", type=float, default=1800.0)
    ext.set_defaults(func=cmd_run_ext)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CommsatError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
