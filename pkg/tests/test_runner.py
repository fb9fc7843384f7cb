import time

import pytest

from commsat.model import Formula
from commsat.runner import CRASH, SAT, TIMEOUT, UNSAT, model_satisfies, parse_solver_output, run_external_solver


def test_parse_output():
    status, model = parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n")
    assert status == SAT and model == [1, -2, 3]
    assert parse_solver_output("s UNSATISFIABLE\n") == (UNSAT, None)
    assert parse_solver_output("nothing here\n") == (None, None)


def test_model_satisfies():
    f = Formula(3, [(1, 2, 3), (-1, -2, 3)])
    assert model_satisfies(f, [3])
    assert not model_satisfies(f, [1, 2])
    assert not model_satisfies(f, [3, -3])


def test_sat_stub(stub_solver, planted_cnf):
    path, inst = planted_cnf
    result = run_external_solver(stub_solver("sat"), path, timeout=20)
    assert result.status == SAT and result.detail == "model verified"
    assert result.returncode == 10
    assert list(result.model) == inst.solution.to_literals()


def test_sleep_stub_times_out(stub_solver, planted_cnf):
    start = time.perf_counter()
    result = run_external_solver(stub_solver("sleep"), planted_cnf[0], timeout=1.0)
    assert result.status == TIMEOUT and result.elapsed == 1.0
    assert time.perf_counter() - start < 10


def test_shell_wrapper_child_is_killed(tmp_path, planted_cnf):
    script = tmp_path / "wrapper.sh"
    script.write_text("#!/bin/sh\nsleep 60\necho 's SATISFIABLE'\n")
    script.chmod(0o755)
    start = time.perf_counter()
    assert run_external_solver(script, planted_cnf[0], timeout=0.5).status == TIMEOUT
    assert time.perf_counter() - start < 10


def test_lying_stub_is_model_mismatch(stub_solver, planted_cnf):
    result = run_external_solver(stub_solver("liar"), planted_cnf[0], timeout=20)
    assert result.status == CRASH and result.detail == "model-mismatch"


def test_unsat_stub(stub_solver, planted_cnf):
    assert run_external_solver(stub_solver("unsat"), planted_cnf[0], timeout=20).status == UNSAT


@pytest.mark.parametrize("kind,detail", [
    ("exit3", "exit code 3"),
    ("silent", "no result line"),
    ("garbage", "unparseable"),
])
def test_crash_outcomes(stub_solver, planted_cnf, kind, detail):
    result = run_external_solver(stub_solver(kind), planted_cnf[0], timeout=20)
    assert result.status == CRASH and detail in result.detail


def test_sat_without_model(stub_solver, planted_cnf):
    result = run_external_solver(stub_solver("nomodel"), planted_cnf[0], timeout=20)
    assert result.status == SAT and result.model is None and result.detail == "no model"
