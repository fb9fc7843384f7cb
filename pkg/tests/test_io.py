import json
import re
import warnings
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from commsat.errors import ParseError, SchemaVersionError
from commsat.generator import GeneratorParams, generate_batch, generate_formula, generate_one
from commsat.io import (
    NonThreeSatWarning,
    load_instance,
    metadata_of,
    read_dimacs,
    read_metadata,
    read_solution_comment,
    write_dimacs,
    write_metadata,
)
from commsat.model import Formula

GOLDEN = Path(__file__).parent / "golden"


def golden_instance():
    return generate_one(GeneratorParams(n=20, c=4, p=0.5, alpha=0.5, r=4.3), 2024, 0)


def test_plain_formula_format():
    assert write_dimacs(Formula(3, [(1, -2, 3)])) == "p cnf 3 1\n1 -2 3 0\n"


def test_default_header(default_instance):
    lines = write_dimacs(default_instance).splitlines()
    assert "p cnf 500 2250" in lines
    assert all(line.startswith("c ") for line in lines[:lines.index("p cnf 500 2250")])


def test_golden_files_byte_stable():
    inst = golden_instance()
    assert write_dimacs(inst) == (GOLDEN / "small.cnf").read_text()
    assert write_metadata(inst) == (GOLDEN / "small.meta.json").read_text()


def test_golden_files_load_back():
    inst = load_instance((GOLDEN / "small.cnf").read_text(), (GOLDEN / "small.meta.json").read_text())
    assert inst == golden_instance()


def test_solution_absent_by_default(default_instance):
    text = write_dimacs(default_instance)
    assert "solution" not in text
    literals = " ".join(map(str, default_instance.solution.to_literals()))
    assert literals not in text
    assert read_solution_comment(text) is None


def test_solution_comment_on_request(small_instance):
    text = write_dimacs(small_instance, include_solution_comment=True)
    assert read_solution_comment(text) == small_instance.solution
    assert read_dimacs(text) == small_instance.formula


def test_round_trip_batch():
    for inst in generate_batch(GeneratorParams(n=50, c=5, alpha=0.7), 10, master_seed=3):
        assert read_dimacs(write_dimacs(inst)) == inst.formula
        assert read_metadata(write_metadata(inst)) == metadata_of(inst)


@settings(max_examples=30, deadline=None)
@given(st.integers(15, 40), st.integers(3, 5), st.floats(0, 1), st.floats(0.5, 6), st.integers(0, 2 ** 63))
def test_round_trip_property(n, c, alpha, r, seed):
    inst = generate_formula(GeneratorParams(n=n, c=c, alpha=alpha, r=r, seed=seed))
    assert read_dimacs(write_dimacs(inst)).clauses == inst.formula.clauses
    assert load_instance(write_dimacs(inst), write_metadata(inst)) == inst


def test_comments_interleaved():
    text = "c hello\np cnf 3 2\nc between\n1 -2 3 0\n\nc again\n-1 2 -3 0\n"
    assert read_dimacs(text) == Formula(3, [(1, -2, 3), (-1, 2, -3)])


@pytest.mark.parametrize("text,line,fragment", [
    ("p cnf 2 1\n1 -5 2 0\n", 2, "exceeds"),
    ("p cnf 3 1\n1 2 3\n", 2, "terminator"),
    ("p cnf 3 1\n1 0 2 0\n", 2, "0 inside"),
    ("p cnf x 1\n1 2 3 0\n", 1, "malformed header"),
    ("p dnf 3 1\n1 2 3 0\n", 1, "malformed header"),
    ("1 2 3 0\np cnf 3 1\n", 1, "before"),
    ("p cnf 3 1\n1 a 3 0\n", 2, "non-integer"),
    ("p cnf 3 1\np cnf 3 1\n", 2, "second header"),
])
def test_parse_errors_carry_line(text, line, fragment):
    with pytest.raises(ParseError, match=fragment) as info:
        read_dimacs(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_clause_count_mismatch():
    with pytest.raises(ParseError, match="announces 2"):
        read_dimacs("p cnf 3 2\n1 2 3 0\n")
    with pytest.raises(ParseError, match="header"):
        read_dimacs("c nothing\n")


def test_non_three_sat_warns():
    with pytest.warns(NonThreeSatWarning):
        f = read_dimacs("p cnf 2 2\n1 0\n-1 2 0\n")
    assert f.clauses == ((1,), (-1, 2))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        read_dimacs("p cnf 3 1\n1 2 3 0\n")


def test_metadata_solution_suppressed(small_instance):
    doc = json.loads(write_metadata(small_instance, include_solution=False))
    assert "solution" not in doc
    meta = read_metadata(write_metadata(small_instance, include_solution=False))
    assert meta.solution is None
    with pytest.raises(ValueError):
        load_instance(write_dimacs(small_instance), write_metadata(small_instance, include_solution=False))


def test_metadata_records_distinct_seeds():
    seeds = {read_metadata(write_metadata(inst)).seed
             for inst in generate_batch(GeneratorParams(n=30, c=3), 5, master_seed=1)}
    assert len(seeds) == 5


def test_schema_version_mismatch(small_instance):
    text = re.sub(r'"schema_version": 1', '"schema_version": 2', write_metadata(small_instance))
    with pytest.raises(SchemaVersionError):
        read_metadata(text)


def test_metadata_partition_restored(small_instance):
    meta = read_metadata(write_metadata(small_instance))
    assert meta.partition() == small_instance.partition
    assert meta.generator_params() == small_instance.params
