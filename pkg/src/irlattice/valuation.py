"""Valuations, the distances they induce, and closed-form valuations.

Exact values are Fractions.  Bulk law and axiom checks rescale them to a
common integer denominator so numpy can compare whole tables at once
without leaving exact arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Mapping, Optional, Sequence, Union

import networkx as nx
import numpy as np

from .errors import KindMismatch, NotDistributive
from .lattice import Element, FinitePoset, LatticeTables, NotALattice, verify_lattice
from .runs import JudgedRun, RelevanceScale, RunKind, check_run, to_fraction

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class WeightAssignment:
    """Strictly positive weights on the join-irreducibles of a lattice."""

    weights: Mapping[int, Fraction]

    def __post_init__(self):
        for j, w in self.weights.items():
            if not w > 0:
                raise ValueError(f"weight of join-irreducible {j} must be positive, got {w}")

    @classmethod
    def constant(cls, tables: LatticeTables, k=1) -> "WeightAssignment":
        k = to_fraction(k)
        return cls({j: k for j in tables.join_irreducibles})

    @classmethod
    def random(cls, tables: LatticeTables, rng: np.random.Generator) -> "WeightAssignment":
        """Weights ``m/16`` with ``m`` uniform on 1..64."""
        m = rng.integers(1, 65, size=len(tables.join_irreducibles))
        return cls({j: Fraction(int(v), 16) for j, v in zip(tables.join_irreducibles, m)})


@dataclass(frozen=True, eq=False)
class Valuation:
    tables: LatticeTables = field(repr=False)
    values: tuple[Fraction, ...]

    def __getitem__(self, x: Element) -> Fraction:
        return self.values[self.tables.index(x)]

    def __len__(self):
        return len(self.values)


def _common_scale(values: Sequence[Fraction]) -> tuple[np.ndarray, int]:
    """Integer array ``a`` and denominator ``d`` with ``values == a / d``."""
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    ints = [int(Fraction(v) * d) for v in values]
    dtype = np.int64 if max(map(abs, ints), default=0) < 2 ** 60 else object
    return np.array(ints, dtype=dtype), d


def valuation_from_weights(tables: LatticeTables, weights: WeightAssignment) -> Valuation:
    """``v(x) = Σ_{j ∈ J_x} w(j)`` on a finite distributive lattice."""
    if not tables.verdict.is_distributive:
        raise NotDistributive("valuations from join-irreducible weights need a distributive lattice")
    ji = tables.join_irreducibles
    missing = set(ji) - set(weights.weights)
    if missing:
        raise ValueError(f"no weight for join-irreducibles {sorted(missing)}")
    w, d = _common_scale([weights.weights[j] for j in ji])
    below = tables.poset.leq[list(ji), :]  # below[k, x]: j_k ⪯ x
    totals = (below.astype(w.dtype) * w[:, None]).sum(axis=0) if len(ji) else np.zeros(len(tables), int)
    return Valuation(tables, tuple(Fraction(int(t), d) for t in totals))


def natural_valuation(tables: LatticeTables, k=1) -> Valuation:
    return valuation_from_weights(tables, WeightAssignment.constant(tables, k))


@dataclass(frozen=True, eq=False)
class ValuationCheck:
    poset: FinitePoset = field(repr=False)
    is_valuation: bool
    is_isotone: bool
    is_positive: bool
    witnesses: dict[str, tuple[int, int]]
    tolerance_used: Optional[float]
    non_lattice: Optional[NotALattice] = None

    def witness_runs(self, prop: str) -> Optional[tuple[JudgedRun, JudgedRun]]:
        pair = self.witnesses.get(prop)
        return None if pair is None else (self.poset.run(pair[0]), self.poset.run(pair[1]))

    def to_dict(self) -> dict:
        lit = self.poset.literal
        return {
            "is_valuation": self.is_valuation,
            "is_isotone": self.is_isotone,
            "is_positive": self.is_positive,
            "witness_pairs": [[lit(a), lit(b)] for a, b in self.witnesses.values()],
            "witnesses": {k: [lit(a), lit(b)] for k, (a, b) in self.witnesses.items()},
            "tolerance_used": self.tolerance_used,
        }


Values = Union[Sequence, Callable[[JudgedRun], object], Valuation]


def _materialise(poset: FinitePoset, f: Values) -> list:
    if isinstance(f, Valuation):
        return list(f.values)
    if callable(f):
        return [f(r) for r in poset.space]
    if len(f) != len(poset):
        raise ValueError(f"expected {len(poset)} values, got {len(f)}")
    return list(f)


def _first(mask: np.ndarray) -> Optional[tuple[int, int]]:
    hit = np.argwhere(mask)
    return None if not len(hit) else (int(hit[0][0]), int(hit[0][1]))


def check_valuation(structure: Union[LatticeTables, FinitePoset], f: Values,
                    tolerance: Optional[float] = None) -> ValuationCheck:
    """Exhaustive valuation-law, isotonicity and positivity checks.

    ``f`` is a per-element sequence or a function of runs.  Float values are
    compared with ``tolerance`` (default 1e-9); exact values exactly.  On a
    poset that is not a lattice the valuation law cannot hold and the pair
    lacking a meet or join is reported as its witness.
    """
    non_lattice = None
    if isinstance(structure, FinitePoset):
        found = verify_lattice(structure)
        if isinstance(found, NotALattice):
            non_lattice, tables, poset = found, None, structure
        else:
            tables, poset = found, structure
    else:
        tables, poset = structure, structure.poset

    raw = _materialise(poset, f)
    exact = not any(isinstance(v, float) for v in raw)
    if exact:
        v, _ = _common_scale(raw)
        tol = 0
        tolerance = None
    else:
        v = np.array(raw, dtype=float)
        tol = DEFAULT_TOLERANCE if tolerance is None else tolerance
        tolerance = tol

    witnesses: dict[str, tuple[int, int]] = {}
    if tables is not None:
        law = v[:, None] + v[None, :] - v[tables.join] - v[tables.meet]
        bad = (law != 0) if exact else (np.abs(law) > tol)
        pair = _first(bad)
    else:
        pair = non_lattice.pair
    if pair is not None:
        witnesses["valuation"] = pair

    diff = v[None, :] - v[:, None]  # v(y) - v(x) for x ⪯ y
    strict = poset.leq & ~np.eye(len(poset), dtype=bool)
    pair = _first(poset.leq & (diff < -tol))
    if pair is not None:
        witnesses["isotone"] = pair
    pair = _first(strict & (diff <= tol))
    if pair is not None:
        witnesses["positive"] = pair

    return ValuationCheck(poset, "valuation" not in witnesses, "isotone" not in witnesses,
                          "positive" not in witnesses, witnesses, tolerance, non_lattice)


def distance(valuation: Valuation, x: Element, y: Element) -> Fraction:
    """``d_v(x, y) = v(x ∨ y) − v(x ∧ y)``."""
    t = valuation.tables
    return valuation.values[t.join_of(x, y)] - valuation.values[t.meet_of(x, y)]


def distance_matrix(tables: LatticeTables, values: Sequence) -> tuple[np.ndarray, int]:
    """All pairwise ``d_v`` as integers over a common denominator."""
    v, d = _common_scale(list(values))
    return v[tables.join] - v[tables.meet], d


def _cover_graph(tables: LatticeTables, values: Sequence[Fraction]) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(len(tables)))
    for i, j in tables.poset.cover_edges():
        g.add_edge(i, j, weight=abs(values[j] - values[i]))
    return g


def shortest_path_distance(tables: LatticeTables, valuation: Union[Valuation, Sequence],
                           x: Element, y: Element) -> Fraction:
    """Weighted shortest path on the Hasse diagram, edge weight ``|Δv|``."""
    values = valuation.values if isinstance(valuation, Valuation) else valuation
    g = _cover_graph(tables, values)
    try:
        return Fraction(nx.dijkstra_path_length(g, tables.index(x), tables.index(y)))
    except nx.NetworkXNoPath:
        raise ValueError("cover graph is disconnected") from None


def shortest_path_matrix(tables: LatticeTables, values: Sequence[Fraction]) -> list[list[Fraction]]:
    g = _cover_graph(tables, values)
    n = len(tables)
    out = [[None] * n for _ in range(n)]
    for src, lengths in nx.all_pairs_dijkstra_path_length(g):
        for dst, length in lengths.items():
            out[src][dst] = Fraction(length)
    if any(v is None for row in out for v in row):
        raise ValueError("cover graph is disconnected")
    return out


@dataclass
class MetricCheck:
    identity: bool = True
    symmetry: bool = True
    triangle: bool = True
    submodular: bool = True
    exhaustive: bool = True
    witnesses: dict = field(default_factory=dict)

    @property
    def is_metric(self) -> bool:
        return self.identity and self.symmetry and self.triangle and self.submodular

    @property
    def is_pseudo_metric(self) -> bool:
        return self.symmetry and self.triangle and self.submodular


def check_metric_axioms(tables: LatticeTables, values: Union[Valuation, Sequence],
                        exhaustive_limit: int = 100, samples: int = 10_000,
                        seed: int = 42) -> MetricCheck:
    """Metric axioms and the lattice contraction inequality for ``d_v``.

    Triples are exhaustive up to ``exhaustive_limit`` elements, otherwise
    ``samples`` seeded random triples are drawn.
    """
    values = values.values if isinstance(values, Valuation) else values
    dist, _ = distance_matrix(tables, values)
    n = len(tables)
    out = MetricCheck(exhaustive=n <= exhaustive_limit)

    off = ~np.eye(n, dtype=bool)
    pair = _first((dist == 0) & off)
    if pair is None and (np.diag(dist) != 0).any():
        i = int(np.flatnonzero(np.diag(dist))[0])
        pair = (i, i)
    if pair is not None:
        out.identity = False
        out.witnesses["identity"] = pair
    pair = _first(dist != dist.T)
    if pair is not None:
        out.symmetry = False
        out.witnesses["symmetry"] = pair

    if out.exhaustive:
        x, y, z = (a.ravel() for a in np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij"))
    else:
        rng = np.random.default_rng(seed)
        x, y, z = rng.integers(0, n, size=(3, samples))
    join, meet = tables.join, tables.meet
    tri = dist[x, z] > dist[x, y] + dist[y, z]
    sub = dist[join[z, x], join[z, y]] + dist[meet[z, x], meet[z, y]] > dist[x, y]
    if tri.any():
        k = int(np.flatnonzero(tri)[0])
        out.triangle = False
        out.witnesses["triangle"] = (int(x[k]), int(y[k]), int(z[k]))
    if sub.any():
        k = int(np.flatnonzero(sub)[0])
        out.submodular = False
        out.witnesses["submodular"] = (int(x[k]), int(y[k]), int(z[k]))
    return out


def _require(run: JudgedRun, kind: RunKind, scale: RelevanceScale) -> None:
    if run.kind is not kind:
        raise KindMismatch(f"expected a {kind.value}-based run, got {run}")
    check_run(run, scale)


def chain_closed_form_set(run: JudgedRun, scale: RelevanceScale, k=1) -> Fraction:
    """``k · Σ_j C(δ(r_j) + N − j, N − j + 1)``: position on the set-based total order."""
    _require(run, RunKind.SET, scale)
    n = len(run)
    total = sum(comb(d + n - j, n - j + 1) for j, d in enumerate(run, start=1))
    return to_fraction(k) * total


def chain_closed_form_rank(run: JudgedRun, scale: RelevanceScale, k=1) -> Fraction:
    """The run read as a base-(c+1) number, rank 1 most significant, times ``k``."""
    _require(run, RunKind.RANK, scale)
    n = len(run)
    total = sum(d * (scale.c + 1) ** (n - j) for j, d in enumerate(run, start=1))
    return to_fraction(k) * total


def replacement_closed_form(run: JudgedRun, scale: RelevanceScale, k=1) -> Fraction:
    """``k · Σ δ(r_i)``, the natural valuation of both replacement orderings."""
    check_run(run, scale)
    return to_fraction(k) * sum(run.degrees)
