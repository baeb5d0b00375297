"""IR effectiveness measures and their classification on each ordering."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence, Union

from .errors import KindMismatch
from .lattice import NotALattice, structure_for
from .orders import Ordering
from .runs import DEFAULT_BUDGET, JudgedRun, RelevanceScale, RunKind, check_run, to_fraction
from .valuation import ValuationCheck, check_valuation


class MeasureKind(enum.Enum):
    GP = "gp"
    GR = "gr"
    GRBP = "grbp"
    DCG = "dcg"

    @property
    def rank_only(self) -> bool:
        return self in (MeasureKind.GRBP, MeasureKind.DCG)


@dataclass(frozen=True)
class MeasureSpec:
    """A measure plus its parameters.

    ``rb`` is the recall base of gR; ``None`` means "equal to the run
    length", which makes gR coincide with gP.
    """

    kind: MeasureKind
    scale: RelevanceScale
    rb: Optional[Fraction] = None
    p: Optional[Fraction] = None
    b: Optional[int] = None

    def __post_init__(self):
        kind = MeasureKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.rb is not None:
            if kind is not MeasureKind.GR:
                raise ValueError("rb only applies to gR")
            object.__setattr__(self, "rb", to_fraction(self.rb))
            if not self.rb > 0:
                raise ValueError(f"recall base must be positive, got {self.rb}")
        if (self.p is not None) != (kind is MeasureKind.GRBP):
            raise ValueError("gRBP needs p, and only gRBP takes p")
        if self.p is not None:
            object.__setattr__(self, "p", to_fraction(self.p))
            if not 0 < self.p < 1:
                raise ValueError(f"persistence must lie in (0, 1), got {self.p}")
        if (self.b is not None) != (kind is MeasureKind.DCG):
            raise ValueError("DCG needs a log base b, and only DCG takes b")
        if self.b is not None and (int(self.b) != self.b or self.b < 2):
            raise ValueError(f"log base must be an integer >= 2, got {self.b}")

    @property
    def name(self) -> str:
        if self.kind is MeasureKind.GP:
            return "gP"
        if self.kind is MeasureKind.GR:
            return "gR" if self.rb is None else f"gR(RB={self.rb})"
        if self.kind is MeasureKind.GRBP:
            return f"gRBP(p={self.p})"
        return f"DCG_{self.b}"

    @property
    def is_exact(self) -> bool:
        return self.kind is not MeasureKind.DCG


def gp(scale: RelevanceScale) -> MeasureSpec:
    return MeasureSpec(MeasureKind.GP, scale)


def gr(scale: RelevanceScale, rb=None) -> MeasureSpec:
    return MeasureSpec(MeasureKind.GR, scale, rb=rb)


def grbp(scale: RelevanceScale, p) -> MeasureSpec:
    return MeasureSpec(MeasureKind.GRBP, scale, p=p)


def dcg(scale: RelevanceScale, b: int = 2) -> MeasureSpec:
    return MeasureSpec(MeasureKind.DCG, scale, b=b)


def make_measure(name: str, scale: RelevanceScale, rb=None, p=None, b=None) -> MeasureSpec:
    kind = MeasureKind(name.lower())
    if kind is MeasureKind.GRBP and p is None:
        raise ValueError("gRBP needs --p")
    if kind is MeasureKind.DCG and b is None:
        b = 2
    return MeasureSpec(kind, scale,
                       rb=rb if kind is MeasureKind.GR else None,
                       p=p if kind is MeasureKind.GRBP else None,
                       b=b if kind is MeasureKind.DCG else None)


def _log_discount(i: int, b: int) -> float:
    if b == 2:
        log = math.log2(i)
    elif b == 10:
        log = math.log10(i)
    else:
        log = math.log(i) / math.log(b)
    return max(1.0, log)


def eval_measure(spec: MeasureSpec, run: JudgedRun) -> Union[Fraction, float]:
    """Score of one run; exact for gP, gR and gRBP, float for DCG."""
    check_run(run, spec.scale)
    if spec.kind.rank_only and run.kind is not RunKind.RANK:
        raise KindMismatch(f"{spec.name} is defined on rank-based runs only")
    g = spec.scale.gain
    top = spec.scale.top_gain
    n = len(run)
    if spec.kind is MeasureKind.GP:
        return sum((g(d) for d in run), Fraction(0)) / (n * top)
    if spec.kind is MeasureKind.GR:
        rb = Fraction(n) if spec.rb is None else spec.rb
        return sum((g(d) for d in run), Fraction(0)) / (rb * top)
    if spec.kind is MeasureKind.GRBP:
        p = spec.p
        return (1 - p) / top * sum((p ** i * g(d) for i, d in enumerate(run)), Fraction(0))
    return sum(float(g(d)) / _log_discount(i, spec.b) for i, d in enumerate(run, start=1))


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    measure: MeasureSpec
    ordering: Ordering
    n: int
    is_valuation: bool
    is_isotone: bool
    is_positive: bool
    witnesses: dict[str, tuple[JudgedRun, JudgedRun]]
    threshold_note: Optional[str] = None
    tolerance_used: Optional[float] = None
    note: Optional[str] = None
    check: Optional[ValuationCheck] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        m = self.measure
        out = {
            "measure": m.name,
            "kind": m.kind.value,
            "params": {"rb": None if m.rb is None else str(m.rb),
                       "p": None if m.p is None else str(m.p),
                       "b": m.b},
            "gains": [str(g) for g in m.scale.gains],
            "ordering": self.ordering.value,
            "n": self.n,
            "c": m.scale.c,
            "is_valuation": self.is_valuation,
            "is_isotone": self.is_isotone,
            "is_positive": self.is_positive,
            "witnesses": {k: [a.literal, b.literal] for k, (a, b) in self.witnesses.items()},
            "tolerance_used": self.tolerance_used,
            "threshold_note": self.threshold_note,
        }
        if self.note:
            out["note"] = self.note
        return out

    CSV_HEADER = ("measure", "ordering", "N", "c", "is_valuation", "is_isotone",
                  "is_positive", "witness1", "witness2")

    def csv_row(self) -> tuple:
        """One CSV row; the witness columns hold the first failing pair."""
        first = next(iter(self.witnesses.values()), None)
        w1, w2 = (first[0].literal, first[1].literal) if first else ("", "")
        return (self.measure.name, self.ordering.value, self.n, self.measure.scale.c,
                self.is_valuation, self.is_isotone, self.is_positive, w1, w2)


def _check_compatible(spec: MeasureSpec, ordering: Ordering) -> None:
    if spec.kind.rank_only and ordering.kind is not RunKind.RANK:
        raise KindMismatch(f"{spec.name} needs a rank-based ordering, not {ordering.value}")


def rbp_threshold(scale: RelevanceScale) -> Fraction:
    """Largest persistence for which gRBP respects projection+replacement: G/(G+1)."""
    gap = min(scale.gains[j] - scale.gains[j - 1] for j in range(1, scale.c + 1)) / scale.top_gain
    return gap / (gap + 1)


def classify(spec: MeasureSpec, ordering: Ordering | str, n: int,
             budget: Optional[int] = DEFAULT_BUDGET) -> ClassificationReport:
    """Exhaustively test ``spec`` for the valuation law, isotonicity and positivity."""
    ordering = Ordering(ordering)
    _check_compatible(spec, ordering)
    poset, tables = structure_for(spec.scale.c, n, ordering, budget)
    values = [eval_measure(spec, r) for r in poset.space]
    structure = poset if isinstance(tables, NotALattice) else tables
    chk = check_valuation(structure, values)
    witnesses = {k: (poset.run(a), poset.run(b)) for k, (a, b) in chk.witnesses.items()}

    note = None
    if chk.non_lattice is not None:
        note = "not a lattice: " + chk.non_lattice.describe(poset)
    threshold_note = None
    if spec.kind is MeasureKind.GRBP and ordering is Ordering.PROJ_REPL_RANK:
        t = rbp_threshold(spec.scale)
        side = "<=" if spec.p <= t else ">"
        threshold_note = f"p={spec.p} {side} G/(G+1)={t}"
    return ClassificationReport(spec, ordering, n, chk.is_valuation, chk.is_isotone,
                                chk.is_positive, witnesses, threshold_note,
                                chk.tolerance_used, note, chk)


@dataclass(frozen=True)
class ThresholdProbe:
    p: Fraction
    isotone: bool
    predicted: bool  # p <= G/(G+1)


def verify_rbp_threshold(scale: RelevanceScale, n: int, probes: Sequence) -> list[ThresholdProbe]:
    t = rbp_threshold(scale)
    out = []
    for p in probes:
        p = to_fraction(p)
        report = classify(grbp(scale, p), Ordering.PROJ_REPL_RANK, n)
        out.append(ThresholdProbe(p, report.is_isotone, p <= t))
    return out


class Property(enum.Enum):
    ISOTONE = "isotone"
    POSITIVE = "positive"
    VALUATION = "valuation"


Scorer = Union[MeasureSpec, Callable[[JudgedRun], object], Mapping[str, object]]


def find_counterexample(measure: Scorer, ordering: Ordering | str, n: int,
                        prop: Property | str, scale: Optional[RelevanceScale] = None,
                        budget: Optional[int] = DEFAULT_BUDGET
                        ) -> Optional[tuple[JudgedRun, JudgedRun]]:
    """Smallest pair, in canonical order, that violates ``prop``.

    ``measure`` is a :class:`MeasureSpec`, any function of runs, or a score
    table keyed by run literal (for measures not built in).  Pairs are
    ordered by the canonical index of the first run, then the second.
    """
    ordering = Ordering(ordering)
    prop = Property(prop)
    if isinstance(measure, MeasureSpec):
        _check_compatible(measure, ordering)
        scale = measure.scale
        score = lambda r: eval_measure(measure, r)  # noqa: E731
    elif scale is None:
        raise ValueError("a scale is needed when the measure is not a MeasureSpec")
    elif isinstance(measure, Mapping):
        table = measure
        score = lambda r: table[r.literal]  # noqa: E731
    else:
        score = measure
    poset, tables = structure_for(scale.c, n, ordering, budget)
    structure = poset if isinstance(tables, NotALattice) else tables
    chk = check_valuation(structure, [score(r) for r in poset.space])
    pair = chk.witnesses.get(prop.value)
    return None if pair is None else (poset.run(pair[0]), poset.run(pair[1]))
