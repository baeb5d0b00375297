"""Finite posets and lattices over run spaces.

Everything here works on element indices of a :class:`~irlattice.runs.RunSpace`;
public functions also accept runs, degree tuples or literals wherever an
element is expected.  Order, meet and join are dense numpy tables, which
keeps exhaustive law checks cheap at the sizes the orderings produce.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from typing import Callable, Iterator, Mapping, Optional, Union

import numpy as np

from .errors import BudgetExceeded, NotDistributive
from .orders import Ordering, leq_matrix
from .runs import DEFAULT_BUDGET, JudgedRun, RunSpace, enumerate_runs, make_scale, space_size

Element = Union[int, JudgedRun, tuple, str]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def transitive_reduction(leq: np.ndarray) -> np.ndarray:
    """Cover matrix of a partial order: ``out[i, j]`` iff ``j`` covers ``i``."""
    lt = leq & ~np.eye(len(leq), dtype=bool)
    # float32 matmul counts paths of length two exactly for n < 2**24
    lt_f = lt.astype(np.float32)
    return lt & ~((lt_f @ lt_f) > 0)


@dataclass(frozen=True, eq=False)
class FinitePoset:
    space: RunSpace
    ordering: Ordering
    leq: np.ndarray = field(repr=False)
    cover_matrix: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.space)

    def index(self, x: Element) -> int:
        if isinstance(x, (int, np.integer)):
            if not 0 <= x < len(self):
                raise IndexError(x)
            return int(x)
        return self.space.index(x)

    def run(self, i: int) -> JudgedRun:
        return self.space[i]

    def literal(self, i: int) -> str:
        return self.space[i].literal

    @cached_property
    def upper_covers(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(np.flatnonzero(row)) for row in self.cover_matrix)

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(np.flatnonzero(col)) for col in self.cover_matrix.T)

    def cover_edges(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.cover_matrix))]

    @cached_property
    def is_chain(self) -> bool:
        return bool((self.leq | self.leq.T).all())

    def is_partial_order(self) -> bool:
        m = self.leq
        refl = bool(np.diag(m).all())
        antisym = not (m & m.T & ~np.eye(len(m), dtype=bool)).any()
        mf = m.astype(np.float32)
        trans = not (((mf @ mf) > 0) & ~m).any()
        return refl and antisym and trans


def build_poset(space: RunSpace, ordering: Ordering | str,
                budget: Optional[int] = DEFAULT_BUDGET) -> FinitePoset:
    ordering = Ordering(ordering)
    if budget is not None and len(space) > budget:
        raise BudgetExceeded(len(space), budget)
    m = _frozen(leq_matrix(ordering, space))
    return FinitePoset(space, ordering, m, _frozen(transitive_reduction(m)))


@dataclass(frozen=True)
class NotALattice:
    """Two elements without a unique meet or join."""

    pair: tuple[int, int]
    operation: str  # "meet" or "join"
    candidates: tuple[int, ...]  # maximal lower / minimal upper bounds

    def describe(self, poset: FinitePoset) -> str:
        x, y = (poset.literal(i) for i in self.pair)
        cands = ", ".join(poset.literal(i) for i in self.candidates) or "none"
        return f"{x} and {y} have no unique {self.operation}; candidates: {cands}"


@dataclass(frozen=True, eq=False)
class LatticeTables:
    poset: FinitePoset
    meet: np.ndarray = field(repr=False)
    join: np.ndarray = field(repr=False)
    bottom: int
    top: int

    def __len__(self):
        return len(self.poset)

    def index(self, x: Element) -> int:
        return self.poset.index(x)

    def meet_of(self, x: Element, y: Element) -> int:
        return int(self.meet[self.index(x), self.index(y)])

    def join_of(self, x: Element, y: Element) -> int:
        return int(self.join[self.index(x), self.index(y)])

    def join_all(self, elements) -> int:
        return reduce(lambda a, b: int(self.join[a, b]), elements, self.bottom)

    @cached_property
    def join_irreducibles(self) -> tuple[int, ...]:
        return join_irreducibles(self)

    @cached_property
    def verdict(self) -> "StructureVerdict":
        return classify_structure(self)


def _bound_table(rel: np.ndarray, size: np.ndarray):
    """Best bound for every pair, or the first pair where none is unique.

    ``rel[l, x]`` says ``l`` is a bound of ``x`` (``l ⪯ x`` for meets, the
    transpose for joins); ``size`` ranks candidates so that the greatest
    lower bound, when it exists, has the largest value among all bounds.
    """
    n = len(rel)
    table = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        bounds = rel[:, x][:, None] & rel  # bounds[l, y]
        score = np.where(bounds, size[:, None], np.iinfo(np.int64).min)
        cand = score.argmax(axis=0)
        empty = ~bounds.any(axis=0)
        # every common bound must sit under the candidate
        bad = empty | (bounds & ~rel[:, cand]).any(axis=0)
        if bad.any():
            return None, (x, int(np.flatnonzero(bad)[0]))
        table[x] = cand
    return table, None


def _extremal_bounds(rel: np.ndarray, x: int, y: int) -> tuple[int, ...]:
    common = np.flatnonzero(rel[:, x] & rel[:, y])
    return tuple(int(l) for l in common
                 if not any(m != l and rel[l, m] for m in common))


def verify_lattice(poset: FinitePoset) -> Union[LatticeTables, NotALattice]:
    """Meet and join tables by scanning common bounds of every pair."""
    m = poset.leq
    down = m.sum(axis=0)  # number of elements below each element
    meet, bad = _bound_table(m, down)
    if meet is None:
        return NotALattice(bad, "meet", _extremal_bounds(m, *bad))
    join, bad = _bound_table(m.T, -down)
    if join is None:
        return NotALattice(bad, "join", _extremal_bounds(m.T, *bad))
    bottom = int(np.flatnonzero(m.all(axis=1))[0])
    top = int(np.flatnonzero(m.all(axis=0))[0])
    return LatticeTables(poset, _frozen(meet), _frozen(join), bottom, top)


@dataclass(frozen=True, eq=False)
class StructureVerdict:
    poset: FinitePoset = field(repr=False)
    is_lattice: bool
    is_distributive: bool
    is_modular: bool
    is_graded: bool
    n5_witness: Optional[tuple[int, int, int, int, int]]
    join_irreducibles: tuple[int, ...]
    distributivity_witness: Optional[tuple[int, int, int]] = None
    non_lattice: Optional[NotALattice] = None

    def to_dict(self) -> dict:
        p = self.poset
        out = {
            "ordering": p.ordering.value,
            "c": p.space.c,
            "n": p.space.n,
            "size": len(p),
            "is_chain": p.is_chain,
            "is_lattice": self.is_lattice,
            "is_distributive": self.is_distributive,
            "is_modular": self.is_modular,
            "is_graded": self.is_graded,
            "n5_witness": None if self.n5_witness is None else [p.literal(i) for i in self.n5_witness],
            "join_irreducible_count": len(self.join_irreducibles),
        }
        if self.non_lattice is not None:
            out["non_lattice_pair"] = [p.literal(i) for i in self.non_lattice.pair]
            out["non_lattice_reason"] = self.non_lattice.describe(p)
        return out


def _distributive_witness(t: LatticeTables) -> Optional[tuple[int, int, int]]:
    meet, join = t.meet, t.join
    for x in range(len(t)):
        lhs = meet[x][join]  # x ∧ (y ∨ z)
        rhs = join[meet[x][:, None], meet[x][None, :]]  # (x ∧ y) ∨ (x ∧ z)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            return x, int(bad[0][0]), int(bad[0][1])
    return None


def _is_modular(t: LatticeTables) -> bool:
    meet, join, m = t.meet, t.join, t.poset.leq
    for x in range(len(t)):
        ys = np.flatnonzero(m[x])
        lhs = join[x][meet[ys]]  # x ∨ (z ∧ y), rows y, cols z
        rhs = meet[ys[:, None], join[x][None, :]]  # (x ∨ z) ∧ y
        if (lhs != rhs).any():
            return False
    return True


def find_n5(t: LatticeTables) -> Optional[tuple[int, int, int, int, int]]:
    """First pentagon ``(0, a, b, c, 1)`` with ``a < b`` and ``c`` off to the side.

    The five elements form a sublattice iff ``a ∧ c = b ∧ c`` and
    ``a ∨ c = b ∨ c``; those shared values are the pentagon's bottom and top.
    """
    m, meet, join = t.poset.leq, t.meet, t.join
    comparable = m | m.T
    for a in range(len(t)):
        bs = np.flatnonzero(m[a])
        bs = bs[bs != a]
        if not len(bs):
            continue
        ok = (~comparable[bs] & ~comparable[a][None, :]
              & (join[bs] == join[a][None, :]) & (meet[bs] == meet[a][None, :]))
        hit = np.argwhere(ok)
        if len(hit):
            b, c = int(bs[hit[0][0]]), int(hit[0][1])
            return int(meet[a, c]), a, b, c, int(join[a, c])
    return None


def heights(poset: FinitePoset) -> np.ndarray:
    """Longest cover-path length from a minimal element to each element."""
    order = np.argsort(poset.leq.sum(axis=0), kind="stable")
    h = np.zeros(len(poset), dtype=np.int64)
    for j in order:
        lows = poset.lower_covers[j]
        if lows:
            h[j] = max(h[i] for i in lows) + 1
    return h


def rank_function(poset: FinitePoset) -> Optional[np.ndarray]:
    """Rank ``ρ`` with ``ρ(y) = ρ(x) + 1`` on every cover, if the poset is graded."""
    h = heights(poset)
    src, dst = np.nonzero(poset.cover_matrix)
    if (h[dst] != h[src] + 1).any():
        return None
    return h


def join_irreducibles_by_covers(t: LatticeTables) -> tuple[int, ...]:
    counts = t.poset.cover_matrix.sum(axis=0)
    return tuple(int(j) for j in np.flatnonzero(counts == 1))


def join_irreducibles_by_definition(t: LatticeTables) -> tuple[int, ...]:
    """Non-bottom ``j`` such that ``x ∨ y = j`` forces ``x = j`` or ``y = j``."""
    n = len(t)
    out = []
    for j in range(n):
        if j == t.bottom:
            continue
        hit = t.join == j
        hit[j, :] = False
        hit[:, j] = False
        if not hit.any():
            out.append(j)
    return tuple(out)


def join_irreducibles(t: LatticeTables) -> tuple[int, ...]:
    by_covers = join_irreducibles_by_covers(t)
    by_def = join_irreducibles_by_definition(t)
    if by_covers != by_def:
        raise RuntimeError(f"join-irreducible checks disagree: {by_covers} vs {by_def}")
    return by_covers


def classify_structure(t: LatticeTables) -> StructureVerdict:
    dist_witness = _distributive_witness(t)
    return StructureVerdict(
        poset=t.poset,
        is_lattice=True,
        is_distributive=dist_witness is None,
        is_modular=_is_modular(t),
        is_graded=rank_function(t.poset) is not None,
        n5_witness=find_n5(t),
        join_irreducibles=join_irreducibles(t),
        distributivity_witness=dist_witness,
    )


def analyze(poset: FinitePoset) -> StructureVerdict:
    """Structure verdict for any poset; non-lattices get an explanatory pair."""
    tables = verify_lattice(poset)
    if isinstance(tables, LatticeTables):
        return tables.verdict
    return StructureVerdict(
        poset=poset,
        is_lattice=False,
        is_distributive=False,
        is_modular=False,
        is_graded=rank_function(poset) is not None,
        n5_witness=None,
        join_irreducibles=(),
        non_lattice=tables,
    )


def irreducibles_below(t: LatticeTables, x: Element) -> frozenset[int]:
    """``J_x``: the join-irreducibles under ``x``."""
    x = t.index(x)
    col = t.poset.leq[:, x]
    return frozenset(j for j in t.join_irreducibles if col[j])


def _antichains(elements: list[int], leq: np.ndarray) -> Iterator[tuple[int, ...]]:
    def extend(start: int, chosen: tuple[int, ...]):
        yield chosen
        for k in range(start, len(elements)):
            e = elements[k]
            if all(not leq[e, f] and not leq[f, e] for f in chosen):
                yield from extend(k + 1, chosen + (e,))

    yield from extend(0, ())


def irredundant_decompositions(t: LatticeTables, x: Element) -> list[frozenset[int]]:
    """Every irredundant set of join-irreducibles whose join is ``x``.

    Redundant sets always contain two comparable elements, so only antichains
    of ``J_x`` are tried.
    """
    x = t.index(x)
    below = sorted(irreducibles_below(t, x))
    found = []
    for chain in _antichains(below, t.poset.leq):
        if not chain or t.join_all(chain) != x:
            continue
        if all(t.join_all(chain[:k] + chain[k + 1:]) != x for k in range(len(chain))):
            found.append(frozenset(chain))
    return found


def birkhoff_decompose(t: LatticeTables, x: Element) -> frozenset[int]:
    """The irredundant join decomposition of ``x`` in a distributive lattice."""
    x = t.index(x)
    if not t.verdict.is_distributive:
        raise NotDistributive("Birkhoff decomposition needs a distributive lattice")
    if x == t.bottom:
        raise ValueError("the bottom element has no join decomposition")
    below = irreducibles_below(t, x)
    m = t.poset.leq
    maximal = frozenset(j for j in below if not any(k != j and m[j, k] for k in below))
    if t.join_all(sorted(maximal)) != x:
        raise RuntimeError(f"maximal join-irreducibles under {t.poset.literal(x)} do not join to it")
    return maximal


Labeler = Union[Callable[[JudgedRun], str], Mapping[str, str], None]


def export_hasse(poset: FinitePoset, labeler: Labeler = None) -> str:
    """Graphviz DOT for the Hasse diagram, edges pointing upwards."""
    def label(i: int) -> str:
        lit = poset.literal(i)
        if callable(labeler):
            return str(labeler(poset.run(i)))
        if labeler and lit in labeler:
            return str(labeler[lit])
        return lit

    name = f"{poset.ordering.value}_c{poset.space.c}_n{poset.space.n}".replace("-", "_")
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i in range(len(poset)):
        lit = poset.literal(i)
        lab = label(i)
        lines.append(f'  "{lit}";' if lab == lit else f'  "{lit}" [label="{lab}"];')
    for i, j in poset.cover_edges():
        lines.append(f'  "{poset.literal(i)}" -> "{poset.literal(j)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


@lru_cache(maxsize=128)
def cached_structure(c: int, n: int, ordering: Ordering):
    """Poset and lattice tables (or :class:`NotALattice`) for an indicator scale."""
    space = enumerate_runs(make_scale(c), n, ordering.kind, budget=None)
    poset = build_poset(space, ordering, budget=None)
    return poset, verify_lattice(poset)


def structure_for(c: int, n: int, ordering: Ordering | str, budget: Optional[int] = DEFAULT_BUDGET):
    ordering = Ordering(ordering)
    size = space_size(c, n, ordering.kind)
    if budget is not None and size > budget:
        raise BudgetExceeded(size, budget)
    return cached_structure(c, n, ordering)

