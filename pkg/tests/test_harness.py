import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymtsp import Instance
from asymtsp.generators import gen_random_metric
from asymtsp.harness import (
    CSV_COLUMNS,
    SweepOptions,
    analyze_row,
    beta_from_fraction,
    emit,
    ingest_csv,
    json_record,
    pivot,
    run_one,
    sweep,
)
from asymtsp.instance import asymmetric_pair_factors
from asymtsp.report import RunReport, within_bound

FRACS = [Fraction(1), Fraction(1, 4), Fraction(0)]


def _insts():
    return [gen_random_metric(7, s, Fraction(1, 2)) for s in (3, 4)]


def test_beta_from_fraction_extremes():
    inst = gen_random_metric(9, 1, Fraction(1, 2))
    assert beta_from_fraction(inst, 0) == (math.inf, 0)
    beta, realized = beta_from_fraction(inst, 1)
    assert beta == 1 and realized == 1
    sym = gen_random_metric(6, 1, 0)
    assert beta_from_fraction(sym, Fraction(1, 2)) == (1, 0)
    with pytest.raises(ValueError):
        beta_from_fraction(inst, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 10), st.fractions(0, 1), st.fractions(0, 1))
def test_beta_from_fraction_monotone(seed, n, p, q):
    inst = gen_random_metric(n, seed, Fraction(1, 2))
    lo, hi = sorted((p, q))
    b_lo, r_lo = beta_from_fraction(inst, lo)
    b_hi, r_hi = beta_from_fraction(inst, hi)
    assert b_lo >= b_hi and r_lo <= r_hi
    factors = asymmetric_pair_factors(inst, Fraction(1, 10))
    if factors and hi > 0:
        assert r_hi >= hi
        kept = sum(1 for f in factors if f.factor is None or f.factor > b_hi)
        assert Fraction(kept, len(factors)) == r_hi


def test_run_one_captures_errors():
    inst = gen_random_metric(12, 2, Fraction(1, 2))
    rep = run_one(inst, "gc", fraction=1, options=SweepOptions(kernel_limit=2))
    assert not rep.ok and rep.error.startswith("CapacityError")
    assert rep.tour_cost is None and rep.ratio is None


def test_run_one_fields():
    inst = gen_random_metric(7, 3, Fraction(1, 2))
    rep = run_one(inst, "gtd", fraction=Fraction(1, 4), reference=(100, "exact"))
    assert rep.algorithm == "gen-treedouble" and rep.root == 0
    assert rep.fraction == Fraction(1, 4)
    assert rep.ratio == Fraction(rep.tour_cost, 100)
    assert rep.wall_time_ms is None
    with pytest.raises(ValueError):
        run_one(inst, "nope")


def test_report_invariants():
    with pytest.raises(ValueError):
        RunReport("x", "gen-christofides", 1, kernel_size=-1)
    with pytest.raises(ValueError):
        RunReport("x", "gen-christofides", 1, tour_cost=3, reference=3)
    r = RunReport("x", "gen-christofides", 1, tour_cost=0).with_reference(0, "exact")
    assert r.ratio == 1
    assert within_bound(RunReport("x", "a", 1, tour_cost=5, bound=Fraction(5, 2)).with_reference(2, "exact"))
    assert not within_bound(RunReport("x", "a", 1, tour_cost=6, bound=Fraction(5, 2)).with_reference(2, "exact"))


def test_empty_sweep_is_header_only():
    data = emit(sweep([], FRACS))
    assert data == (",".join(CSV_COLUMNS) + "\n").encode()


def test_sweep_is_byte_identical():
    opts = SweepOptions(threads=1)
    a = emit(sweep(_insts(), FRACS, options=opts))
    b = emit(sweep(_insts(), FRACS, options=opts))
    assert a == b
    rows = ingest_csv(a)
    assert len(rows) == 2 * 2 * 3
    assert list(rows[0]) == list(CSV_COLUMNS)


def test_sweep_parallel_matches_serial(monkeypatch):
    monkeypatch.delenv("ASYMTSP_THREADS", raising=False)
    serial = emit(sweep(_insts(), FRACS, options=SweepOptions(threads=1)))
    parallel = emit(sweep(_insts(), FRACS, options=SweepOptions(threads=2)))
    assert serial == parallel


def test_sweep_rows_respect_bounds():
    for rep in sweep(_insts(), FRACS, options=SweepOptions(threads=1)):
        assert rep.ok and rep.ref_source == "exact"
        assert within_bound(rep)


def test_json_output():
    reps = sweep(_insts()[:1], [Fraction(0)], ["gc"], SweepOptions(threads=1))
    rec = json_record(reps[0])
    assert rec["beta"] == "inf" and rec["fraction"] == 0
    assert emit(reps, "json").startswith(b"[\n")
    with pytest.raises(ValueError):
        emit(reps, "xml")


def test_pivot_layout():
    rows = ingest_csv(emit(sweep(_insts(), FRACS, options=SweepOptions(threads=1))))
    header, table = pivot(rows)
    assert header == ["instance", "algorithm", "100.00%", "25.00%", "0.00%"]
    assert len(table) == 4
    for line in table:
        for cell in line[2:]:
            kernel, ratio = cell.split("/")
            assert kernel.isdigit() and float(ratio) >= 1
    # zero fraction never keeps anything in the kernel
    gc_row = next(r for r in table if r[1] == "gen-christofides")
    assert gc_row[-1].startswith("0/")


def test_analyze_row():
    inst = Instance.from_matrix([[0, 1, 2], [1, 0, 0], [4, 0, 0]], name="a")
    row = analyze_row(inst)
    assert row["symmetric"] == "67%"
    assert row["median"] == "2.00" and row["max"] == "2.00"
    assert row["zero"] == "33%"
    sym = analyze_row(gen_random_metric(5, 0, 0))
    assert sym["symmetric"] == "100%" and sym["median"] == "-"
