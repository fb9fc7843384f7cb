import random
import sys

import pytest

from commsat.generator import GeneratorParams, generate_formula
from commsat.io import write_dimacs

ACCEPTANCE_RESULTS = []


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def small_instance():
    return generate_formula(GeneratorParams(n=30, r=4.3, c=5, p=0.4, alpha=0.6, seed=7))


@pytest.fixture(scope="session")
def default_instance():
    return generate_formula(GeneratorParams(seed=1))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


STUB_BODIES = {
    # echoes the planted solution that the CNF carries as a comment
    "sat": """
lits = next(l.split()[2:] for l in open(sys.argv[1]) if l.startswith("c solution "))
print("c stub"); print("s SATISFIABLE"); print("v " + " ".join(lits) + " 0")
sys.exit(10)
""",
    "liar": """
lits = next(l.split()[2:] for l in open(sys.argv[1]) if l.startswith("c solution "))
print("s SATISFIABLE"); print("v " + " ".join(str(-int(x)) for x in lits) + " 0")
sys.exit(10)
""",
    "unsat": 'print("s UNSATISFIABLE"); sys.exit(20)',
    "sleep": "time.sleep(60)",
    "exit3": "sys.exit(3)",
    "silent": "pass",
    "garbage": 'print("s SATISFIABLE"); print("v 1 x 0")',
    "nomodel": 'print("s SATISFIABLE")',
}


@pytest.fixture
def stub_solver(tmp_path):
    def make(kind):
        path = tmp_path / f"stub_{kind}.py"
        path.write_text(f"#!{sys.executable}\nimport sys, time\n{STUB_BODIES[kind]}\n")
        path.chmod(0o755)
        return path
    return make


@pytest.fixture
def planted_cnf(tmp_path):
    inst = generate_formula(GeneratorParams(n=40, c=4, r=4.3, seed=21))
    path = tmp_path / "planted.cnf"
    path.write_text(write_dimacs(inst, include_solution_comment=True))
    return path, inst
