"""Valuations from join-irreducible weights, and the metrics they induce."""
from fractions import Fraction

import numpy as np

import irlattice as il
from irlattice.valuation import distance_matrix, shortest_path_matrix

poset, tables = il.structure_for(2, 3, "repl-rank")

# %% unit weights count join-irreducibles: v(x) is the sum of degrees
v = il.natural_valuation(tables)
sums = poset.space.degree_array().sum(axis=1)
print("natural valuation == degree sum:", all(v[i] == s for i, s in enumerate(sums)))

# %% any positive weights give a positive valuation
rng = np.random.default_rng(42)
w = il.WeightAssignment.random(tables, rng)
vw = il.valuation_from_weights(tables, w)
chk = il.check_valuation(tables, vw)
print("random weights:", {k: str(x) for k, x in w.weights.items()})
print("valuation", chk.is_valuation, "isotone", chk.is_isotone, "positive", chk.is_positive)

# %% d(x, y) = v(x v y) - v(x ^ y), compared with shortest paths on the Hasse diagram
dist, den = distance_matrix(tables, vw.values)
paths = shortest_path_matrix(tables, vw.values)
same = all(Fraction(int(dist[i, j]), den) == paths[i][j]
           for i in range(len(tables)) for j in range(len(tables)))
print("join/meet distance equals shortest path:", same)
print("metric axioms:", il.check_metric_axioms(tables, vw).is_metric)

# %% Birkhoff: every element is the join of the maximal irreducibles below it
for lit in ("102", "221", "010"):
    parts = il.birkhoff_decompose(tables, lit)
    print(lit, "=", " v ".join(sorted(poset.literal(j) for j in parts)))

# %% closed forms for the two chains
s2 = il.make_scale(2)
for lit in ("2110", "2211"):
    r = il.parse_run(lit, il.RunKind.SET, s2)
    print(r, "sits at", il.chain_closed_form_set(r, s2), "on the set chain")
r = il.parse_run("1021", il.RunKind.RANK, s2)
print(r, "sits at", il.chain_closed_form_rank(r, s2), "on the rank chain")
