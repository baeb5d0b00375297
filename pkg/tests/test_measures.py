import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from irlattice import (
    ClassificationReport,
    KindMismatch,
    LatticeTables,
    MeasureKind,
    MeasureSpec,
    Ordering,
    Property,
    RunKind,
    classify,
    dcg,
    eval_measure,
    find_counterexample,
    gp,
    gr,
    grbp,
    leq,
    make_measure,
    make_scale,
    parse_run,
    rbp_threshold,
    structure_for,
    verify_rbp_threshold,
)

S1, S2 = make_scale(1), make_scale(2)
SWEEP = [(c, n) for c in (1, 2) for n in range(1, 5)] + [(1, 5), (1, 6)]


def run(lit, kind=RunKind.RANK, scale=S2):
    return parse_run(lit, kind, scale)


def all_measures(scale, n, kind):
    out = [gp(scale), gr(scale, n), gr(scale, 2 * n)]
    if kind is RunKind.RANK:
        out += [grbp(scale, Fraction(1, 2)), grbp(scale, Fraction(4, 5)), dcg(scale, 2), dcg(scale, 10)]
    return out


def test_precision_values():
    assert eval_measure(gp(S2), run("2000", RunKind.SET)) == Fraction(1, 4)
    assert eval_measure(gp(S2), run("1110", RunKind.SET)) == Fraction(3, 8)
    assert eval_measure(gp(S1), run("1000", scale=S1)) == Fraction(1, 4)
    assert eval_measure(gp(S1), run("0011", scale=S1)) == Fraction(1, 2)
    assert eval_measure(gp(S2), run("0000")) == 0


def test_tied_precision_under_swap():
    a, b = run("101", scale=S1), run("110", scale=S1)
    assert eval_measure(gp(S1), a) == eval_measure(gp(S1), b) == Fraction(2, 3)


def test_dcg_values():
    assert eval_measure(dcg(S1, 2), run("0100", scale=S1)) == 1.0
    got = eval_measure(dcg(S1, 2), run("0011", scale=S1))
    assert got == pytest.approx(1 / math.log2(3) + 1 / 2, abs=1e-12)
    assert abs(got - 1.131) < 1e-3


def test_rbp_value():
    assert eval_measure(grbp(S1, Fraction(1, 2)), run("1010", scale=S1)) == Fraction(5, 8)
    assert eval_measure(grbp(S2, "1/2"), run("2")) == Fraction(1, 2)


def test_recall_base():
    assert gr(S2).name == "gR"
    assert eval_measure(gr(S2, 8), run("2110")) == Fraction(1, 4)
    assert eval_measure(gr(S2), run("2110")) == eval_measure(gp(S2), run("2110"))


@given(st.integers(1, 3).flatmap(lambda c: st.tuples(
    st.just(c), st.lists(st.integers(0, c), min_size=1, max_size=6),
    st.fractions(min_value=Fraction(1, 10), max_value=20))))
def test_recall_is_scaled_precision(args):
    c, degrees, rb = args
    scale = make_scale(c)
    r = parse_run("".join(map(str, degrees)), RunKind.RANK, scale)
    n = len(degrees)
    assert eval_measure(gr(scale, rb), r) == Fraction(n) / rb * eval_measure(gp(scale), r)


@pytest.mark.parametrize("kwargs", [
    dict(kind=MeasureKind.GRBP, p=Fraction(1)),
    dict(kind=MeasureKind.GRBP, p=Fraction(0)),
    dict(kind=MeasureKind.GRBP),
    dict(kind=MeasureKind.GP, p=Fraction(1, 2)),
    dict(kind=MeasureKind.GR, rb=Fraction(0)),
    dict(kind=MeasureKind.DCG, b=1),
    dict(kind=MeasureKind.DCG),
    dict(kind=MeasureKind.GRBP, p=0.5),
])
def test_bad_specs(kwargs):
    with pytest.raises(ValueError):
        MeasureSpec(scale=S2, **kwargs)


def test_make_measure():
    assert make_measure("dcg", S2).b == 2
    assert make_measure("grbp", S2, p=Fraction(3, 5)).name == "gRBP(p=3/5)"
    with pytest.raises(ValueError):
        make_measure("grbp", S2)


def test_rank_only_measures():
    with pytest.raises(KindMismatch):
        eval_measure(dcg(S2), run("2100", RunKind.SET))
    with pytest.raises(KindMismatch):
        classify(grbp(S2, "1/2"), Ordering.REPL_SET, 3)


def test_classify_examples():
    r = classify(gp(S2), Ordering.REPL_RANK, 3)
    assert r.is_valuation and r.is_isotone and r.is_positive and not r.witnesses

    r = classify(gp(S1), Ordering.PROJ_REPL_RANK, 4)
    assert r.is_valuation and not r.is_isotone
    assert [x.literal for x in r.witnesses["isotone"]] == ["0011", "0100"]
    a, b = run("0011", scale=S1), run("1000", scale=S1)
    assert leq(Ordering.PROJ_REPL_RANK, a, b)
    assert eval_measure(gp(S1), a) > eval_measure(gp(S1), b)

    r = classify(dcg(S1, 2), Ordering.SWAP_REPL_RANK, 4)
    assert r.is_isotone and not r.is_positive and r.tolerance_used == 1e-9

    r = classify(gp(S2), Ordering.PROJ_REPL_SET, 4)
    assert r.is_valuation and not r.is_isotone


def test_rbp_threshold_values():
    assert rbp_threshold(S1) == Fraction(1, 2)
    assert rbp_threshold(S2) == Fraction(1, 3)
    assert rbp_threshold(make_scale(2, [0, 3, 4])) == Fraction(1, 5)


@pytest.mark.parametrize("scale, p, isotone", [
    (S1, "2/5", True), (S1, "1/2", True), (S1, "3/5", False),
    (S2, "3/10", True), (S2, "1/3", True), (S2, "2/5", False),
    (make_scale(2, [0, 3, 4]), "1/5", True), (make_scale(2, [0, 3, 4]), "1/4", False),
])
def test_rbp_threshold_flip(scale, p, isotone):
    (probe,) = verify_rbp_threshold(scale, 4, [p])
    assert probe.isotone is isotone is probe.predicted


def test_threshold_note():
    r = classify(grbp(S1, "3/5"), Ordering.PROJ_REPL_RANK, 4)
    assert not r.is_isotone and r.threshold_note == "p=3/5 > G/(G+1)=1/2"


def test_find_counterexample_examples():
    got = find_counterexample(gp(S2), Ordering.PROJ_REPL_SET, 4, Property.ISOTONE)
    assert [x.literal for x in got] == ["1110", "2000"]
    assert find_counterexample(gp(S2), Ordering.REPL_SET, 3, "isotone") is None
    # smallest violating pair in canonical order
    got = find_counterexample(gp(S1), Ordering.SWAP_REPL_RANK, 3, Property.POSITIVE)
    assert [x.literal for x in got] == ["001", "010"]


def test_find_counterexample_custom_scores():
    # a score table keyed by literal, e.g. for measures that are not built in
    poset, _ = structure_for(1, 2, Ordering.PROJ_REPL_RANK)
    table = {"00": 0, "01": Fraction(1, 2), "10": Fraction(1, 4), "11": 1}
    got = find_counterexample(table, Ordering.PROJ_REPL_RANK, 2, "isotone", scale=S1)
    assert [x.literal for x in got] == ["01", "10"]
    got = find_counterexample(lambda r: sum(r.degrees), Ordering.REPL_RANK, 2, "positive", scale=S1)
    assert got is None
    with pytest.raises(ValueError):
        find_counterexample(table, Ordering.PROJ_REPL_RANK, 2, "isotone")


@pytest.mark.parametrize("c, n", SWEEP)
def test_replacement_orderings_positive(c, n):
    scale = make_scale(c)
    for ordering in (Ordering.REPL_SET, Ordering.REPL_RANK):
        for spec in all_measures(scale, n, ordering.kind):
            r = classify(spec, ordering, n)
            assert r.is_valuation and r.is_isotone and r.is_positive, spec.name


@pytest.mark.parametrize("c, n", SWEEP)
def test_chains_always_valuations(c, n):
    scale = make_scale(c)
    for ordering in (Ordering.PROJ_REPL_SET, Ordering.PROJ_REPL_RANK):
        for spec in all_measures(scale, n, ordering.kind):
            assert classify(spec, ordering, n).is_valuation


@pytest.mark.parametrize("c, n", SWEEP)
def test_swap_verdicts(c, n):
    scale = make_scale(c)
    _, tables = structure_for(c, n, Ordering.SWAP_REPL_RANK)
    lattice = isinstance(tables, LatticeTables)
    for spec in all_measures(scale, n, RunKind.RANK):
        r = classify(spec, Ordering.SWAP_REPL_RANK, n)
        assert r.is_isotone, spec.name
        assert r.is_valuation == lattice
        if r.is_positive:
            assert r.is_isotone
        if spec.kind is MeasureKind.GRBP or n == 1:
            # decreasing positional weights: every strict step raises gRBP
            assert r.is_positive, spec.name
        else:
            # ties between the first two positions
            assert not r.is_positive, spec.name


def test_gr_verdicts_match_gp():
    for ordering in Ordering:
        for rb in (Fraction(1, 3), 4, 9):
            a = classify(gp(S2), ordering, 3)
            b = classify(gr(S2, rb), ordering, 3)
            assert (a.is_valuation, a.is_isotone, a.is_positive) == (b.is_valuation, b.is_isotone, b.is_positive)


def test_report_exports():
    r = classify(gp(S1), Ordering.PROJ_REPL_RANK, 4)
    d = r.to_dict()
    assert d["measure"] == "gP" and d["witnesses"]["isotone"] == ["0011", "0100"]
    row = r.csv_row()
    assert len(row) == len(ClassificationReport.CSV_HEADER)
    assert row[-2:] == ("0011", "0100")
    ok = classify(gp(S1), Ordering.REPL_RANK, 2).csv_row()
    assert ok[-2:] == ("", "")


def test_non_lattice_note():
    r = classify(gp(S2), Ordering.SWAP_REPL_RANK, 2)
    assert not r.is_valuation and r.note.startswith("not a lattice: 12 and 20")
