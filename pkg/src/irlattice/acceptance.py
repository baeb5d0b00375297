"""Exhaustive acceptance suite: structure, closed forms, measures and metrics.

Each criterion is a function returning a :class:`CriterionResult`.  Failures
carry short human-readable details; budget overruns are reported as
failures rather than raised.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import BudgetExceeded
from .lattice import (
    LatticeTables,
    NotALattice,
    analyze,
    birkhoff_decompose,
    irreducibles_below,
    irredundant_decompositions,
    structure_for,
)
from .measures import (
    Property,
    classify,
    dcg,
    eval_measure,
    find_counterexample,
    gp,
    gr,
    grbp,
    rbp_threshold,
    verify_rbp_threshold,
)
from .orders import Ordering, leq_matrix
from .runs import DEFAULT_BUDGET, RunKind, enumerate_runs, make_run, make_scale, parse_run
from .valuation import (
    WeightAssignment,
    chain_closed_form_rank,
    chain_closed_form_set,
    check_metric_axioms,
    distance_matrix,
    replacement_closed_form,
    shortest_path_matrix,
    valuation_from_weights,
)

SWEEP = tuple((c, n) for c in (1, 2) for n in range(1, 5)) + ((1, 5), (1, 6))
N5_CANDIDATES = ((3, 2), (4, 1), (4, 2))  # (N, c)
MAX_DETAILS = 8


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: tuple[str, ...] = ()

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        head = f"[{mark}] {self.number}. {self.title}"
        return head if self.passed or not self.details else f"{head}: {self.details[0]}"


class _Collector:
    def __init__(self):
        self.failures: list[str] = []

    def expect(self, ok: bool, message: str) -> bool:
        if not ok:
            self.failures.append(message)
        return ok

    def result(self, number: int, title: str) -> CriterionResult:
        extra = len(self.failures) - MAX_DETAILS
        details = self.failures[:MAX_DETAILS]
        if extra > 0:
            details.append(f"... and {extra} more")
        return CriterionResult(number, title, not self.failures, tuple(details))


def _guarded(number: int, title: str):
    def wrap(fn: Callable[..., _Collector]):
        def run(budget: Optional[int] = DEFAULT_BUDGET, seed: int = 42) -> CriterionResult:
            try:
                return fn(budget=budget, seed=seed).result(number, title)
            except BudgetExceeded as exc:
                return CriterionResult(number, title, False, (f"budget error: {exc}",))
        run.__name__ = fn.__name__
        run.number = number
        run.title = title
        return run
    return wrap


def _lattice(c: int, n: int, ordering: Ordering, budget) -> Optional[LatticeTables]:
    _, tables = structure_for(c, n, ordering, budget)
    return None if isinstance(tables, NotALattice) else tables


def _distributive_spaces(budget):
    """Every (c, N, ordering, tables) in the sweep that is a distributive lattice."""
    for c, n in SWEEP:
        for ordering in Ordering:
            tables = _lattice(c, n, ordering, budget)
            if tables is not None and tables.verdict.is_distributive:
                yield c, n, ordering, tables


def expected_join_irreducibles(ordering: Ordering, c: int, n: int) -> set[tuple[int, ...]]:
    """Join-irreducibles of the replacement orderings in closed form.

    Set-based: ``m`` copies of degree ``j`` then zeros.  Rank-based: a single
    non-zero degree at one position.
    """
    if ordering is Ordering.REPL_SET:
        return {(j,) * m + (0,) * (n - m) for j in range(1, c + 1) for m in range(1, n + 1)}
    if ordering is Ordering.REPL_RANK:
        return {tuple(j if i == p else 0 for i in range(n))
                for j in range(1, c + 1) for p in range(n)}
    raise ValueError(f"no closed form for {ordering.value}")


@_guarded(1, "structure verdicts")
def criterion_structure(budget=DEFAULT_BUDGET, seed=42) -> _Collector:
    col = _Collector()
    for c, n in SWEEP:
        for ordering in Ordering:
            poset, _ = structure_for(c, n, ordering, budget)
            v = analyze(poset)
            tag = f"{ordering.value} c={c} N={n}"
            if ordering.is_chain:
                col.expect(poset.is_chain, f"{tag} is not a chain")
            elif ordering is Ordering.SWAP_REPL_RANK:
                reason = "" if v.non_lattice is None else f" ({v.non_lattice.describe(poset)})"
                col.expect(v.is_lattice, f"{tag} is not a lattice{reason}")
            else:
                col.expect(v.is_lattice and v.is_distributive, f"{tag} is not a distributive lattice")
    found = []
    for n, c in N5_CANDIDATES:
        poset, _ = structure_for(c, n, Ordering.SWAP_REPL_RANK, budget)
        v = analyze(poset)
        if v.n5_witness is not None:
            found.append((n, c))
    col.expect(bool(found), "no N5 sublattice in swap-repl-rank at (N,c) in "
               + ", ".join(map(str, N5_CANDIDATES)))
    return col


@_guarded(2, "join-irreducible counts")
def criterion_join_irreducibles(budget=DEFAULT_BUDGET, seed=42) -> _Collector:
    col = _Collector()
    for c, n in SWEEP:
        for ordering in (Ordering.PROJ_REPL_SET, Ordering.PROJ_REPL_RANK,
                         Ordering.REPL_SET, Ordering.REPL_RANK):
            tables = _lattice(c, n, ordering, budget)
            tag = f"{ordering.value} c={c} N={n}"
            if not col.expect(tables is not None, f"{tag} is not a lattice"):
                continue
            ji = tables.join_irreducibles
            if ordering.is_chain:
                col.expect(len(ji) == len(tables) - 1,
                           f"{tag}: {len(ji)} join-irreducibles, expected {len(tables) - 1}")
                continue
            got = {tables.poset.run(j).degrees for j in ji}
            col.expect(len(ji) == n * c, f"{tag}: {len(ji)} join-irreducibles, expected {n * c}")
            col.expect(got == expected_join_irreducibles(ordering, c, n),
                       f"{tag}: join-irreducibles differ from the closed form")
    return col


def _chain_index(ordering: Ordering, c: int, n: int, budget) -> tuple:
    space = enumerate_runs(make_scale(c), n, ordering.kind, budget)
    return space, leq_matrix(ordering, space).sum(axis=0) - 1


@_guarded(3, "closed-form oracles")
def criterion_closed_forms(budget=DEFAULT_BUDGET, seed=42) -> _Collector:
    col = _Collector()
    for c in (1, 2):
        for n in range(1, 6):
            space, index = _chain_index(Ordering.PROJ_REPL_SET, c, n, budget)
            for r, i in zip(space, index):
                col.expect(chain_closed_form_set(r, space.scale) == i,
                           f"set chain c={c} N={n}: {r} at {i}, formula {chain_closed_form_set(r, space.scale)}")
    scale = make_scale(2)
    for lit, want in (("2110", 7), ("2211", 11)):
        run = parse_run(lit, RunKind.SET, scale)
        col.expect(chain_closed_form_set(run, scale) == want, f"{run} should sit at {want}")

    for c in range(1, 729):
        n = 1
        while (c + 1) ** n <= 729:
            space, index = _chain_index(Ordering.PROJ_REPL_RANK, c, n, budget)
            formula = space.degree_array() @ ((c + 1) ** np.arange(n - 1, -1, -1))
            bad = np.flatnonzero(formula != index)
            if len(bad):
                col.expect(False, f"rank chain c={c} N={n}: first mismatch at {space[int(bad[0])]}")
            if c <= 2:
                for r, i in zip(space, index):
                    col.expect(chain_closed_form_rank(r, space.scale) == i,
                               f"rank chain c={c} N={n}: {r} at {i}")
            n += 1

    for c, n in SWEEP:
        for ordering in (Ordering.REPL_SET, Ordering.REPL_RANK):
            tables = _lattice(c, n, ordering, budget)
            if not col.expect(tables is not None, f"{ordering.value} c={c} N={n} is not a lattice"):
                continue
            scale = tables.poset.space.scale
            for i, r in enumerate(tables.poset.space):
                col.expect(replacement_closed_form(r, scale) == len(irreducibles_below(tables, i)),
                           f"{ordering.value} c={c} N={n}: |J_x| differs from the sum of degrees at {r}")
    return col


@_guarded(4, "reference counterexamples")
def criterion_counterexamples(budget=DEFAULT_BUDGET, seed=42) -> _Collector:
    col = _Collector()
    s2, s1 = make_scale(2), make_scale(1)
    for lit, want in (("2000", Fraction(1, 4)), ("1110", Fraction(3, 8))):
        got = eval_measure(gp(s2), parse_run(lit, RunKind.SET, s2))
        col.expect(got == want, f"gP({{{lit}}}) = {got}, expected {want}")
    for lit, want in (("1000", Fraction(1, 4)), ("0011", Fraction(1, 2))):
        got = eval_measure(gp(s1), parse_run(lit, RunKind.RANK, s1))
        col.expect(got == want, f"gP(({lit})) = {got}, expected {want}")
    for lit, want in (("0100", 1.0), ("0011", 1.131)):
        got = eval_measure(dcg(s1, 2), parse_run(lit, RunKind.RANK, s1))
        col.expect(abs(got - want) <= 1e-3, f"DCG_2(({lit})) = {got:.4f}, expected {want}")

    cases = (
        (gp(s2), Ordering.PROJ_REPL_SET, 4, Property.ISOTONE, ("1110", "2000")),
        (gp(s2), Ordering.REPL_SET, 3, Property.ISOTONE, None),
        (gp(s1), Ordering.SWAP_REPL_RANK, 3, Property.POSITIVE, ("101", "110")),
    )
    for spec, ordering, n, prop, want in cases:
        got = find_counterexample(spec, ordering, n, prop, budget=budget)
        lits = None if got is None else (got[0].literal, got[1].literal)
        col.expect(lits == want, f"{spec.name} {ordering.value} c={spec.scale.c} N={n} {prop.value}: "
                   f"got {lits}, expected {want}")
    return col


def _measures(scale, n: int, kind: RunKind) -> list:
    out = [gp(scale), gr(scale, n), gr(scale, 2 * n)]
    if kind is RunKind.RANK:
        out += [grbp(scale, Fraction(1, 2)), grbp(scale, Fraction(4, 5)), dcg(scale, 2), dcg(scale, 10)]
    return out


@_guarded(5, "proposition suite")
def criterion_propositions(budget=DEFAULT_BUDGET, seed=42) -> _Collector:
    col = _Collector()
    for c, n in SWEEP:
        scale = make_scale(c)
        for ordering in (Ordering.REPL_SET, Ordering.REPL_RANK):
            for spec in _measures(scale, n, ordering.kind):
                rep = classify(spec, ordering, n, budget)
                col.expect(rep.is_valuation and rep.is_isotone and rep.is_positive,
                           f"{spec.name} on {ordering.value} c={c} N={n} is not a positive valuation")
        lattice = _lattice(c, n, Ordering.SWAP_REPL_RANK, budget) is not None
        for spec in _measures(scale, n, RunKind.RANK):
            rep = classify(spec, Ordering.SWAP_REPL_RANK, n, budget)
            tag = f"{spec.name} on swap-repl-rank c={c} N={n}"
            if lattice:
                col.expect(rep.is_valuation, f"{tag} breaks the valuation law")
            col.expect(rep.is_isotone, f"{tag} is not isotone")
            if n >= 2:
                col.expect(not rep.is_positive, f"{tag} is positive")
    return col


@_guarded(6, "RBP persistence threshold")
def criterion_rbp_threshold(budget=DEFAULT_BUDGET, seed=42) -> _Collector:
    col = _Collector()
    cases = (
        (make_scale(1), Fraction(1, 2), ("1/4", "2/5", "1/2", "3/5", "4/5")),
        (make_scale(2), Fraction(1, 3), ("3/10", "2/5")),
    )
    for scale, threshold, probes in cases:
        col.expect(rbp_threshold(scale) == threshold,
                   f"c={scale.c}: threshold {rbp_threshold(scale)}, expected {threshold}")
        for probe in verify_rbp_threshold(scale, 4, probes):
            col.expect(probe.isotone == (probe.p <= threshold),
                       f"c={scale.c} p={probe.p}: isotone={probe.isotone}")
    return col


@_guarded(7, "metric axioms")
def criterion_metric(budget=DEFAULT_BUDGET, seed=42) -> _Collector:
    col = _Collector()
    rng = np.random.default_rng(seed)
    for c, n, ordering, tables in _distributive_spaces(budget):
        tag = f"{ordering.value} c={c} N={n}"
        for trial in range(20):
            v = valuation_from_weights(tables, WeightAssignment.random(tables, rng))
            chk = check_metric_axioms(tables, v, seed=seed + trial)
            col.expect(chk.is_metric, f"{tag} trial {trial}: axioms fail {sorted(chk.witnesses)}")
            dist, den = distance_matrix(tables, v.values)
            paths = shortest_path_matrix(tables, v.values)
            ok = all(Fraction(int(dist[i, j]), den) == paths[i][j]
                     for i in range(len(tables)) for j in range(len(tables)))
            col.expect(ok, f"{tag} trial {trial}: d_v differs from the shortest-path distance")
    return col


@_guarded(8, "pseudo-metric on swap-repl-rank")
def criterion_pseudo_metric(budget=DEFAULT_BUDGET, seed=42) -> _Collector:
    col = _Collector()
    scale = make_scale(1)
    for n in range(1, 5):
        tables = _lattice(1, n, Ordering.SWAP_REPL_RANK, budget)
        tag = f"swap-repl-rank c=1 N={n}"
        if not col.expect(tables is not None, f"{tag} is not a lattice"):
            continue
        values = [eval_measure(gp(scale), r) for r in tables.poset.space]
        chk = check_metric_axioms(tables, values, exhaustive_limit=math.inf)
        col.expect(chk.symmetry and chk.triangle, f"{tag}: symmetry or triangle inequality fails")
        if n >= 2:
            col.expect(not chk.identity, f"{tag}: no distinct pair at distance 0")
        if n == 3:
            dist, _ = distance_matrix(tables, values)
            i, j = tables.index(make_run((1, 0, 1), RunKind.RANK)), tables.index(make_run((1, 1, 0), RunKind.RANK))
            col.expect(dist[i, j] == 0, "(1,0,1) and (1,1,0) are not at distance 0")
    return col


@_guarded(9, "Birkhoff round-trip")
def criterion_birkhoff(budget=DEFAULT_BUDGET, seed=42) -> _Collector:
    col = _Collector()
    for c, n, ordering, tables in _distributive_spaces(budget):
        for x in range(len(tables)):
            if x == tables.bottom:
                continue
            decomps = irredundant_decompositions(tables, x)
            lit = tables.poset.literal(x)
            if not col.expect(len(decomps) == 1,
                              f"{ordering.value} c={c} N={n}: {lit} has {len(decomps)} decompositions"):
                continue
            d = birkhoff_decompose(tables, x)
            col.expect(d == decomps[0] and tables.join_all(sorted(d)) == x,
                       f"{ordering.value} c={c} N={n}: decomposition of {lit} does not re-join")
    return col


CRITERIA = (
    criterion_structure,
    criterion_join_irreducibles,
    criterion_closed_forms,
    criterion_counterexamples,
    criterion_propositions,
    criterion_rbp_threshold,
    criterion_metric,
    criterion_pseudo_metric,
    criterion_birkhoff,
)


def _run_one(args) -> CriterionResult:
    k, budget, seed = args
    return CRITERIA[k](budget=budget, seed=seed)


def run_acceptance(budget: Optional[int] = DEFAULT_BUDGET, seed: int = 42,
                   workers: int = 1) -> list[CriterionResult]:
    """Run every criterion; results come back in criterion order."""
    jobs = [(k, budget, seed) for k in range(len(CRITERIA))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(j) for j in jobs]


def format_table(results: list[CriterionResult]) -> str:
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines)
