"""The five orderings on judged runs.

Each ordering has a scalar predicate :func:`leq` that follows the textual
definition literally, and a vectorised :func:`leq_matrix` used to build
posets.  The two routes are cross-checked in the test-suite.
"""
from __future__ import annotations

import enum
from typing import Optional

import numpy as np

from .errors import KindMismatch
from .runs import JudgedRun, RelevanceScale, RunKind, RunSpace, make_run


class Ordering(enum.Enum):
    PROJ_REPL_SET = "proj-repl-set"
    REPL_SET = "repl-set"
    PROJ_REPL_RANK = "proj-repl-rank"
    REPL_RANK = "repl-rank"
    SWAP_REPL_RANK = "swap-repl-rank"

    @property
    def kind(self) -> RunKind:
        if self in (Ordering.PROJ_REPL_SET, Ordering.REPL_SET):
            return RunKind.SET
        return RunKind.RANK

    @property
    def is_chain(self) -> bool:
        return self in (Ordering.PROJ_REPL_SET, Ordering.PROJ_REPL_RANK)

    @property
    def has_closed_form(self) -> bool:
        return self is not Ordering.SWAP_REPL_RANK


def _check_kinds(ordering: Ordering, *runs: JudgedRun) -> None:
    for r in runs:
        if r.kind is not ordering.kind:
            raise KindMismatch(f"{ordering.value} compares {ordering.kind.value}-based runs, got {r}")
    if len({len(r) for r in runs}) > 1:
        raise KindMismatch("runs of different lengths are not comparable")


def _count_at(run: JudgedRun, degree: int) -> int:
    return sum(1 for d in run if d == degree)


def _count_at_least(run: JudgedRun, degree: int, upto: int | None = None) -> int:
    seq = run.degrees if upto is None else run.degrees[:upto]
    return sum(1 for d in seq if d >= degree)


def leq(ordering: Ordering | str, r: JudgedRun, s: JudgedRun) -> bool:
    """``r ⪯ s`` under ``ordering``."""
    ordering = Ordering(ordering)
    _check_kinds(ordering, r, s)
    if r == s:
        return True
    top = max(max(r), max(s))

    if ordering is Ordering.PROJ_REPL_SET:
        for j in range(top, -1, -1):
            a, b = _count_at(r, j), _count_at(s, j)
            if a != b:
                return a < b
        return True
    if ordering is Ordering.REPL_SET:
        return all(_count_at_least(r, j) <= _count_at_least(s, j) for j in range(top + 1))
    if ordering is Ordering.PROJ_REPL_RANK:
        k = next(i for i in range(len(r)) if r[i] != s[i])
        return r[k] <= s[k]
    if ordering is Ordering.REPL_RANK:
        return all(a <= b for a, b in zip(r, s))
    # swap + replacement: prefix dominance at every threshold
    return all(_count_at_least(r, j, k) <= _count_at_least(s, j, k)
               for j in range(top + 1) for k in range(1, len(r) + 1))


def leq_matrix(ordering: Ordering | str, space: RunSpace) -> np.ndarray:
    """Boolean matrix ``M[i, j] = elements[i] ⪯ elements[j]`` over a space."""
    ordering = Ordering(ordering)
    if space.kind is not ordering.kind:
        raise KindMismatch(f"{ordering.value} needs a {ordering.kind.value}-based space")
    deg = space.degree_array()
    c = space.c
    thresholds = np.arange(1, c + 1)

    if ordering in (Ordering.PROJ_REPL_SET, Ordering.PROJ_REPL_RANK):
        if ordering is Ordering.PROJ_REPL_SET:
            # counts of a_c, a_{c-1}, ..., a_1 compared lexicographically
            keys = np.stack([(deg == j).sum(axis=1) for j in range(c, 0, -1)], axis=1)
        else:
            keys = deg
        rank = np.empty(len(space), dtype=np.int64)
        order = np.lexsort(keys.T[::-1])
        rank[order] = np.arange(len(space))
        return rank[:, None] <= rank[None, :]
    if ordering is Ordering.REPL_RANK:
        return (deg[:, None, :] <= deg[None, :, :]).all(axis=2)
    if ordering is Ordering.REPL_SET:
        counts = (deg[:, :, None] >= thresholds).sum(axis=1)
        return (counts[:, None, :] <= counts[None, :, :]).all(axis=2)
    prefix = np.cumsum(deg[:, :, None] >= thresholds, axis=1).reshape(len(space), -1)
    out = np.ones((len(space), len(space)), dtype=bool)
    for col in prefix.T:
        out &= col[:, None] <= col[None, :]
    return out


def closed_form_meet_join(ordering: Ordering | str, r: JudgedRun,
                          s: JudgedRun) -> Optional[tuple[JudgedRun, JudgedRun]]:
    """``(r ∧ s, r ∨ s)`` from the known formulas, or ``None`` for swap+replacement.

    Chains take the smaller and larger element; the replacement orderings
    take positionwise min and max (for set runs, of the sorted forms).
    """
    ordering = Ordering(ordering)
    _check_kinds(ordering, r, s)
    if not ordering.has_closed_form:
        return None
    if ordering.is_chain:
        return (r, s) if leq(ordering, r, s) else (s, r)
    lo = tuple(map(min, r, s))
    hi = tuple(map(max, r, s))
    if ordering.kind is RunKind.SET:
        # min/max of two non-increasing sequences stay non-increasing
        assert list(lo) == sorted(lo, reverse=True) and list(hi) == sorted(hi, reverse=True)
    return make_run(lo, ordering.kind), make_run(hi, ordering.kind)


def chain_successor(ordering: Ordering | str, run: JudgedRun,
                    scale: RelevanceScale) -> Optional[JudgedRun]:
    """Immediate successor of ``run`` on one of the two total orders."""
    ordering = Ordering(ordering)
    _check_kinds(ordering, run)
    if not ordering.is_chain:
        raise ValueError(f"{ordering.value} is not a total order")
    c, n = scale.c, len(run)
    if ordering is Ordering.PROJ_REPL_RANK:
        digits = list(run)
        i = n - 1
        while i >= 0 and digits[i] == c:
            digits[i] = 0
            i -= 1
        if i < 0:
            return None
        digits[i] += 1
        return make_run(digits, RunKind.RANK)
    # counts (n_c, ..., n_1): next vector in lex order with total <= n
    counts = [_count_at(run, j) for j in range(c, 0, -1)]
    for pos in range(c - 1, -1, -1):
        cand = counts[:pos] + [counts[pos] + 1] + [0] * (c - 1 - pos)
        if sum(cand) <= n:
            degrees = [c - p for p, m in enumerate(cand) for _ in range(m)]
            return make_run(degrees + [0] * (n - len(degrees)), RunKind.SET)
    return None


def cover(ordering: Ordering | str, r: JudgedRun, s: JudgedRun, scale: RelevanceScale) -> bool:
    """``r ⋖ s``: ``s`` covers ``r``."""
    ordering = Ordering(ordering)
    _check_kinds(ordering, r, s)
    if ordering.is_chain:
        return chain_successor(ordering, r, scale) == s
    if ordering in (Ordering.REPL_SET, Ordering.REPL_RANK):
        diff = [(a, b) for a, b in zip(r, s) if a != b]
        return len(diff) == 1 and diff[0][1] == diff[0][0] + 1
    from .lattice import build_poset
    from .runs import enumerate_runs

    space = enumerate_runs(scale, len(r), RunKind.RANK, budget=None)
    poset = build_poset(space, ordering, budget=None)
    return bool(poset.cover_matrix[space.index(r), space.index(s)])
