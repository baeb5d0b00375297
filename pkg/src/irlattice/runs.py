"""Relevance scales, judged runs and exhaustive run spaces.

Relevance degrees are stored as integer indices ``0..c``; gains are exact
:class:`fractions.Fraction` values so that measure values can be compared
for equality without float noise.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidRun, InvalidScale

DEFAULT_BUDGET = 20_000


class RunKind(enum.Enum):
    SET = "set"
    RANK = "rank"


@dataclass(frozen=True)
class RelevanceScale:
    """Degrees ``a_0 < ... < a_c`` together with a gain function.

    ``gains[j]`` is the gain of degree ``j``.  Use :func:`make_scale` rather
    than the constructor; it fills in the indicator gain.
    """

    c: int
    gains: tuple[Fraction, ...]

    def __post_init__(self):
        if self.c < 1:
            raise InvalidScale(f"need at least one non-zero degree, got c={self.c}")
        if len(self.gains) != self.c + 1:
            raise InvalidScale(f"expected {self.c + 1} gains, got {len(self.gains)}")
        if self.gains[0] != 0:
            raise InvalidScale(f"gain of a_0 must be 0, got {self.gains[0]}")
        for j in range(self.c):
            if not self.gains[j] < self.gains[j + 1]:
                raise InvalidScale(f"gains must be strictly increasing: {[str(g) for g in self.gains]}")

    def gain(self, degree: int) -> Fraction:
        return self.gains[degree]

    @property
    def top_gain(self) -> Fraction:
        return self.gains[self.c]

    @property
    def is_indicator(self) -> bool:
        return all(g == j for j, g in enumerate(self.gains))


def make_scale(c: int, gains: Sequence | None = None) -> RelevanceScale:
    """Build a scale with ``c`` non-zero degrees.

    Without ``gains`` the indicator gain ``g(a_j) = j`` is used.  Gains may be
    ints, Fractions or ``"num/den"`` strings; floats are rejected.
    """
    if gains is None:
        gains = range(c + 1)
    return RelevanceScale(c, tuple(to_fraction(g) for g in gains))


def to_fraction(value) -> Fraction:
    if isinstance(value, float) or (isinstance(value, str) and any(ch in value for ch in ".eE")):
        raise InvalidScale(f"exact value required, got float {value!r}; use 'num/den'")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidScale(f"not a rational number: {value!r}") from exc


@dataclass(frozen=True, order=True)
class JudgedRun:
    kind: RunKind
    degrees: tuple[int, ...]

    def __len__(self):
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    def __getitem__(self, i):
        return self.degrees[i]

    @property
    def literal(self) -> str:
        return "".join(str(d) for d in self.degrees)

    def __str__(self):
        if self.kind is RunKind.SET:
            return "{" + ",".join(map(str, self.degrees)) + "}"
        return "(" + ",".join(map(str, self.degrees)) + ")"


def _check_degrees(degrees: Sequence[int], scale: RelevanceScale | None) -> tuple[int, ...]:
    out = tuple(int(d) for d in degrees)
    if not out:
        raise InvalidRun("a run needs at least one document")
    top = scale.c if scale is not None else None
    for d in out:
        if d < 0 or (top is not None and d > top):
            raise InvalidRun(f"degree {d} outside 0..{top}")
    return out


def rank_run(degrees: Sequence[int], scale: RelevanceScale | None = None) -> JudgedRun:
    return JudgedRun(RunKind.RANK, _check_degrees(degrees, scale))


def canonicalize_set_run(degrees: Sequence[int], scale: RelevanceScale | None = None) -> JudgedRun:
    """Set-based run with its degrees listed in non-increasing order."""
    return JudgedRun(RunKind.SET, tuple(sorted(_check_degrees(degrees, scale), reverse=True)))


def make_run(degrees: Sequence[int], kind: RunKind, scale: RelevanceScale | None = None) -> JudgedRun:
    if kind is RunKind.SET:
        return canonicalize_set_run(degrees, scale)
    return rank_run(degrees, scale)


def parse_run(literal: str, kind: RunKind, scale: RelevanceScale | None = None) -> JudgedRun:
    """Parse a digit literal such as ``"2110"`` (rank 1 first)."""
    literal = literal.strip()
    if not literal.isdigit():
        raise InvalidRun(f"run literal must be a string of digits, got {literal!r}")
    return make_run([int(ch) for ch in literal], kind, scale)


def check_run(run: JudgedRun, scale: RelevanceScale) -> None:
    _check_degrees(run.degrees, scale)
    if run.kind is RunKind.SET and list(run.degrees) != sorted(run.degrees, reverse=True):
        raise InvalidRun(f"set-based run {run} is not in canonical order")


def space_size(c: int, n: int, kind: RunKind) -> int:
    if kind is RunKind.RANK:
        return (c + 1) ** n
    return comb(n + c, c)


@dataclass(frozen=True, eq=False)
class RunSpace:
    """All judged runs of length ``n`` over a scale, in lexicographic order."""

    scale: RelevanceScale
    n: int
    kind: RunKind
    elements: tuple[JudgedRun, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {r.degrees: i for i, r in enumerate(self.elements)})

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i) -> JudgedRun:
        return self.elements[i]

    @property
    def c(self) -> int:
        return self.scale.c

    def index(self, run: JudgedRun | Sequence[int] | str) -> int:
        """Element index of a run, a degree sequence or a literal."""
        if isinstance(run, str):
            run = parse_run(run, self.kind, self.scale)
        elif not isinstance(run, JudgedRun):
            run = make_run(run, self.kind, self.scale)
        elif run.kind is not self.kind:
            raise InvalidRun(f"{run.kind.value}-based run in a {self.kind.value}-based space")
        try:
            return self._index[run.degrees]
        except KeyError:
            raise InvalidRun(f"{run} is not a run of this space") from None

    @property
    def bottom(self) -> JudgedRun:
        return self.elements[0]

    @property
    def top(self) -> JudgedRun:
        return self.elements[-1]

    def degree_array(self) -> np.ndarray:
        return np.array([r.degrees for r in self.elements], dtype=np.int64)


def enumerate_runs(scale: RelevanceScale, n: int, kind: RunKind | str,
                   budget: int | None = DEFAULT_BUDGET) -> RunSpace:
    kind = RunKind(kind)
    if n < 1:
        raise InvalidRun(f"run length must be positive, got N={n}")
    size = space_size(scale.c, n, kind)
    if budget is not None and size > budget:
        raise BudgetExceeded(size, budget)
    if kind is RunKind.RANK:
        seqs: Iterable = itertools.product(range(scale.c + 1), repeat=n)
    else:
        seqs = sorted(tuple(sorted(t, reverse=True))
                      for t in itertools.combinations_with_replacement(range(scale.c + 1), n))
    return RunSpace(scale, n, kind, tuple(JudgedRun(kind, tuple(s)) for s in seqs))


def gain_sum(run: JudgedRun, scale: RelevanceScale) -> Fraction:
    check_run(run, scale)
    return sum((scale.gain(d) for d in run.degrees), Fraction(0))
