from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymtsp import Instance, ParseError, Tour
from asymtsp.generators import gen_random_metric
from asymtsp.tsplib import (
    OptimaRegistry,
    parse_tour,
    parse_tsplib,
    read_tsplib,
    reference_optimum,
    write_tour,
    write_tsplib,
)

from conftest import enumerate_optimum

SAMPLE = """NAME: tiny
TYPE: ATSP
COMMENT: three cities
DIMENSION: 3
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: FULL_MATRIX
EDGE_WEIGHT_SECTION
 9999 1 2
 3 9999
 4 5 6 9999
EOF
"""


def test_parse_sample():
    inst = parse_tsplib(SAMPLE)
    assert inst.name == "tiny"
    assert inst.cost.tolist() == [[0, 1, 2], [3, 0, 4], [5, 6, 0]]
    assert inst.scale == 1


def test_write_is_canonical_fixpoint():
    once = write_tsplib(parse_tsplib(SAMPLE))
    assert write_tsplib(parse_tsplib(once)) == once
    assert once.startswith(b"NAME: tiny\nTYPE: ATSP\nDIMENSION: 3\n")


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10**6), st.integers(1, 7))
def test_round_trip(n, seed, scale):
    rng = np.random.default_rng(seed)
    C = rng.integers(0, 1000, size=(n, n))
    np.fill_diagonal(C, 0)
    inst = Instance(C, name=f"r{seed}", scale=scale)
    back = parse_tsplib(write_tsplib(inst))
    assert back.same_costs(inst) and back.scale == scale and back.name == inst.name


def test_read_file_uses_stem_when_unnamed(tmp_path):
    p = tmp_path / "abc.atsp"
    p.write_text(SAMPLE.replace("NAME: tiny\n", ""))
    assert read_tsplib(p).name == "abc"


def test_tsp_type_accepted():
    inst = parse_tsplib(SAMPLE.replace("TYPE: ATSP", "TYPE: TSP"))
    assert inst.n == 3


@pytest.mark.parametrize(
    "mutate, line, match",
    [
        (lambda s: s.replace("TYPE: ATSP", "TYPE: CVRP"), 2, "TYPE"),
        (lambda s: s.replace("EXPLICIT", "EUC_2D"), 5, "EDGE_WEIGHT_TYPE"),
        (lambda s: s.replace("FULL_MATRIX", "UPPER_ROW"), 6, "FORMAT"),
        (lambda s: s.replace("DIMENSION: 3", "DIMENSION: x"), 4, "integer"),
        (lambda s: s.replace(" 3 9999", " 3 q"), 9, "non-integer"),
        (lambda s: s.replace(" 3 9999", " 3 -1"), 9, "negative"),
        (lambda s: s.replace(" 4 5 6 9999", " 4 5 6 9999 7"), 10, "more than"),
        (lambda s: s.replace("COMMENT: three cities", "oops"), 3, "KEY"),
    ],
)
def test_parse_errors_carry_line(mutate, line, match):
    with pytest.raises(ParseError, match=match) as info:
        parse_tsplib(mutate(SAMPLE))
    assert info.value.line == line
    assert info.value.exit_code == 2


def test_parse_errors_short_and_missing():
    with pytest.raises(ParseError, match="expected 9"):
        parse_tsplib(SAMPLE.replace(" 4 5 6 9999", " 4 5"))
    with pytest.raises(ParseError, match="DIMENSION"):
        parse_tsplib(SAMPLE.replace("DIMENSION: 3\n", ""))
    with pytest.raises(ParseError, match="EDGE_WEIGHT_SECTION"):
        parse_tsplib("NAME: x\nDIMENSION: 2\n")


def test_scale_comment():
    inst = Instance(np.array([[0, 3], [5, 0]]), name="half", scale=2)
    data = write_tsplib(inst)
    assert b"COMMENT: asymtsp-scale 2" in data
    assert parse_tsplib(data).real(5) == Fraction(5, 2)


def test_tour_round_trip():
    t = Tour([2, 0, 3, 1])
    data = write_tour(t, name="x")
    assert b"TOUR_SECTION\n3\n1\n4\n2\n-1\nEOF" in data
    assert parse_tour(data) == t


def test_tour_errors():
    with pytest.raises(ParseError):
        parse_tour("NAME: x\n")
    with pytest.raises(ParseError, match="1-based"):
        parse_tour("TOUR_SECTION\n0\n-1\n")
    with pytest.raises(ParseError, match="empty"):
        parse_tour("TOUR_SECTION\nEOF\n")


def test_builtin_registry():
    reg = OptimaRegistry.builtin()
    assert len(reg) == 19
    assert reg.get("ftv33.atsp").cost == 1286
    assert reg.get("br17").cost == 39
    assert "ft53" in reg and "nope" not in reg


def test_registry_rejects_bad_entries():
    with pytest.raises(ValueError):
        OptimaRegistry.from_text("a 1 raw\na 2 raw\n")
    with pytest.raises(ValueError):
        OptimaRegistry.from_text("a 0 raw\n")
    with pytest.raises(ValueError):
        OptimaRegistry.from_text("a 3 fancy\n")


def test_reference_optimum_sources():
    inst = gen_random_metric(7, 2, Fraction(1, 5))
    assert reference_optimum(inst) == (220, "exact")
    big = gen_random_metric(18, 0)
    big.name = "ftv33"
    assert reference_optimum(big, OptimaRegistry.builtin(), exact_limit=10) == (1286, "registry-raw")
    assert reference_optimum(big, None, exact_limit=10) is None


def test_reference_optimum_scaled():
    inst = Instance(np.array([[0, 1, 3], [3, 0, 1], [1, 3, 0]]), scale=4)
    cost, src = reference_optimum(inst)
    assert cost == Fraction(enumerate_optimum(inst), 4) and src == "exact"
