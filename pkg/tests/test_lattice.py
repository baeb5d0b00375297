import itertools

import numpy as np
import pytest

from irlattice import (
    BudgetExceeded,
    FinitePoset,
    LatticeTables,
    NotALattice,
    NotDistributive,
    Ordering,
    RunKind,
    analyze,
    birkhoff_decompose,
    build_poset,
    enumerate_runs,
    export_hasse,
    irreducibles_below,
    irredundant_decompositions,
    join_irreducibles,
    make_scale,
    rank_function,
    structure_for,
    verify_lattice,
)
from irlattice.lattice import (
    find_n5,
    join_irreducibles_by_covers,
    join_irreducibles_by_definition,
    transitive_reduction,
)

SWEEP = [(c, n) for c in (1, 2) for n in range(1, 5)] + [(1, 5), (1, 6)]


def custom_poset(pairs, size=5):
    """A poset on ``size`` abstract elements given by its strict relations."""
    space = enumerate_runs(make_scale(size - 1), 1, RunKind.SET)
    m = np.eye(size, dtype=bool)
    for a, b in pairs:
        m[a, b] = True
    for k in range(size):  # Warshall closure
        m |= m[:, [k]] & m[[k], :]
    return FinitePoset(space, Ordering.REPL_SET, m, transitive_reduction(m))


N5 = custom_poset([(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
M3 = custom_poset([(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
BOWTIE = custom_poset([(0, 2), (0, 3), (1, 2), (1, 3)], size=4)


def _lattices():
    for c, n in SWEEP:
        for ordering in Ordering:
            _, t = structure_for(c, n, ordering)
            if isinstance(t, LatticeTables):
                yield pytest.param(t, id=f"{ordering.value}-c{c}-n{n}")


LATTICES = list(_lattices())


def test_diamond():
    poset = build_poset(enumerate_runs(make_scale(1), 2, RunKind.RANK), Ordering.REPL_RANK)
    assert len(poset) == 4
    assert sorted((poset.literal(i), poset.literal(j)) for i, j in poset.cover_edges()) == [
        ("00", "01"), ("00", "10"), ("01", "11"), ("10", "11")]


def test_set_chain():
    poset, _ = structure_for(2, 4, Ordering.PROJ_REPL_SET)
    assert len(poset) == 15 and poset.is_chain
    assert len(poset.cover_edges()) == 14


@pytest.mark.parametrize("ordering", list(Ordering))
def test_single_document_is_two_chain(ordering):
    poset, _ = structure_for(1, 1, ordering)
    assert len(poset) == 2 and poset.is_chain


def test_budget():
    with pytest.raises(BudgetExceeded):
        structure_for(2, 4, Ordering.REPL_RANK, budget=80)


@pytest.mark.parametrize("t", LATTICES)
def test_lattice_laws(t):
    meet, join, m = t.meet, t.join, t.poset.leq
    n = len(t)
    idx = np.arange(n)
    assert (meet == meet.T).all() and (join == join.T).all()
    assert (meet[idx, idx] == idx).all() and (join[idx, idx] == idx).all()
    # associativity
    x, y, z = (a.ravel() for a in np.meshgrid(idx, idx, idx, indexing="ij"))
    assert (meet[meet[x, y], z] == meet[x, meet[y, z]]).all()
    assert (join[join[x, y], z] == join[x, join[y, z]]).all()
    # absorption
    assert (meet[idx[:, None], join] == idx[:, None]).all()
    assert (join[idx[:, None], meet] == idx[:, None]).all()
    # greatest lower bound: below both, and above every common lower bound
    assert (m[meet, idx[:, None]] & m[meet, idx[None, :]]).all()
    for a, b in itertools.combinations(range(n), 2):
        lower = m[:, a] & m[:, b]
        assert m[lower, meet[a, b]].all()
        upper = m[a, :] & m[b, :]
        assert m[join[a, b], upper].all()


@pytest.mark.parametrize("t", LATTICES)
def test_hasse_is_transitive_reduction(t):
    m = t.poset.leq.astype(int)
    lt = m - np.eye(len(m), dtype=int)
    cover = t.poset.cover_matrix
    # i ⋖ j iff i < j with no k strictly between
    between = (lt @ lt) > 0
    assert (cover == ((lt > 0) & ~between)).all()


@pytest.mark.parametrize("t", LATTICES)
def test_structure_invariants(t):
    v = t.verdict
    if v.is_distributive:
        assert v.is_modular
    assert v.is_modular == (v.n5_witness is None)
    assert join_irreducibles_by_covers(t) == join_irreducibles_by_definition(t)
    if v.is_distributive and v.is_graded:
        rho = rank_function(t.poset)
        assert all(rho[x] == len(irreducibles_below(t, x)) for x in range(len(t)))


def test_reference_verdicts():
    for c, n in SWEEP:
        for ordering in (Ordering.PROJ_REPL_SET, Ordering.PROJ_REPL_RANK):
            poset, t = structure_for(c, n, ordering)
            assert poset.is_chain and t.verdict.is_distributive
        for ordering in (Ordering.REPL_SET, Ordering.REPL_RANK):
            _, t = structure_for(c, n, ordering)
            assert t.verdict.is_distributive


def test_swap_binary_is_distributive():
    for n in range(1, 7):
        _, t = structure_for(1, n, Ordering.SWAP_REPL_RANK)
        assert isinstance(t, LatticeTables) and t.verdict.is_distributive


def test_swap_binary_meet():
    _, t = structure_for(1, 3, Ordering.SWAP_REPL_RANK)
    assert t.poset.literal(t.meet_of("100", "011")) == "010"


@pytest.mark.parametrize("n", [2, 3, 4])
def test_swap_graded_scale_is_not_a_lattice(n):
    poset, t = structure_for(2, n, Ordering.SWAP_REPL_RANK)
    assert isinstance(t, NotALattice)
    v = analyze(poset)
    assert not v.is_lattice and v.n5_witness is None
    # two maximal lower bounds, neither above the other
    a, b = t.candidates
    assert not poset.leq[a, b] and not poset.leq[b, a]
    assert all(poset.leq[x, p] for x in t.candidates for p in t.pair)


def test_swap_smallest_non_lattice_pair():
    poset, t = structure_for(2, 2, Ordering.SWAP_REPL_RANK)
    assert t.describe(poset) == "12 and 20 have no unique meet; candidates: 02, 10"
    # same pair seen from the join side: (0,2) and (1,0) have two minimal upper bounds
    m = poset.leq
    i, j = poset.index("02"), poset.index("10")
    upper = np.flatnonzero(m[i] & m[j])
    minimal = [u for u in upper if not any(w != u and m[w, u] for w in upper)]
    assert sorted(poset.literal(u) for u in minimal) == ["12", "20"]


def test_n5_detector():
    t = verify_lattice(N5)
    assert isinstance(t, LatticeTables)
    v = t.verdict
    assert not v.is_modular and not v.is_distributive
    assert v.n5_witness == (0, 1, 2, 3, 4)


def test_m3_is_modular_not_distributive():
    v = verify_lattice(M3).verdict
    assert v.is_modular and not v.is_distributive and v.n5_witness is None
    assert v.distributivity_witness is not None


def test_bowtie_is_not_a_lattice():
    t = verify_lattice(BOWTIE)
    assert isinstance(t, NotALattice)
    # the two minimal elements have no lower bound at all
    assert t.pair == (0, 1) and t.operation == "meet" and t.candidates == ()
    assert t.describe(BOWTIE).endswith("candidates: none")


@pytest.mark.parametrize("ordering, expected", [
    (Ordering.REPL_RANK, {"1000", "2000", "0100", "0200", "0010", "0020", "0001", "0002"}),
    (Ordering.REPL_SET, {"1000", "1100", "1110", "1111", "2000", "2200", "2220", "2222"}),
])
def test_join_irreducible_shapes(ordering, expected):
    _, t = structure_for(2, 4, ordering)
    assert {t.poset.literal(j) for j in join_irreducibles(t)} == expected


def test_chain_join_irreducibles():
    _, t = structure_for(2, 4, Ordering.PROJ_REPL_SET)
    assert len(t.join_irreducibles) == 14 and t.bottom not in t.join_irreducibles


def test_irreducibles_below():
    _, rank = structure_for(2, 4, Ordering.REPL_RANK)
    _, sets = structure_for(2, 4, Ordering.REPL_SET)
    assert len(irreducibles_below(rank, "1021")) == 4
    assert len(irreducibles_below(sets, "2110")) == 4
    assert irreducibles_below(rank, "0000") == frozenset()


def test_birkhoff():
    _, t = structure_for(2, 3, Ordering.REPL_RANK)
    d = birkhoff_decompose(t, "102")
    assert {t.poset.literal(j) for j in d} == {"100", "002"}
    for j in t.join_irreducibles:
        assert birkhoff_decompose(t, j) == {j}
    with pytest.raises(ValueError):
        birkhoff_decompose(t, "000")
    _, chain = structure_for(2, 3, Ordering.PROJ_REPL_RANK)
    x = chain.index("120")
    assert birkhoff_decompose(chain, x) == {x}


def test_birkhoff_refuses_non_distributive():
    with pytest.raises(NotDistributive):
        birkhoff_decompose(verify_lattice(M3), 4)


def test_decomposition_unique_on_distributive():
    _, t = structure_for(2, 3, Ordering.REPL_SET)
    for x in range(len(t)):
        if x != t.bottom:
            assert irredundant_decompositions(t, x) == [birkhoff_decompose(t, x)]


def test_m3_top_has_three_decompositions():
    assert len(irredundant_decompositions(verify_lattice(M3), 4)) == 3


def test_hasse_dot():
    poset, _ = structure_for(1, 1, Ordering.REPL_RANK)
    dot = export_hasse(poset)
    assert '"0" -> "1";' in dot and dot.count("->") == 1
    poset, _ = structure_for(1, 2, Ordering.REPL_RANK)
    dot = export_hasse(poset, {})
    assert dot.count("->") == 4 and dot.count('";') == 8
    assert 'label="x"' in export_hasse(poset, lambda r: "x")
