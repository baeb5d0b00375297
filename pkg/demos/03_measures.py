"""Which IR measures are valuations, isotone or positive on which ordering."""
from fractions import Fraction

import numpy as np

import irlattice as il

s1 = il.make_scale(1)
measures = [il.gp(s1), il.gr(s1, 8), il.grbp(s1, Fraction(1, 2)), il.dcg(s1, 2)]

# %% verdict table for binary runs of length 4
rows = []
for ordering in ("proj-repl-rank", "repl-rank", "swap-repl-rank"):
    for m in measures:
        r = il.classify(m, ordering, 4)
        rows.append((ordering, m.name, r.is_valuation, r.is_isotone, r.is_positive))
for row in rows:
    print("{:15s} {:14s} valuation={!s:5} isotone={!s:5} positive={!s:5}".format(*row))

# %% precision ignores order, so a swap leaves it unchanged
a, b = il.rank_run([1, 0, 1, 0]), il.rank_run([1, 1, 0, 0])
print("gP", il.eval_measure(measures[0], a), il.eval_measure(measures[0], b))
print("gRBP", il.eval_measure(measures[2], a), il.eval_measure(measures[2], b))

# %% RBP on the lexicographic chain: isotone iff p <= G/(G+1)
grid = [Fraction(k, 20) for k in range(1, 20)]
probes = il.verify_rbp_threshold(s1, 4, grid)
flags = np.array([p.isotone for p in probes])
print("threshold", il.rbp_threshold(s1), "last isotone p:", grid[np.flatnonzero(flags)[-1]])

# %% smallest counterexample for any score table
poset, _ = il.structure_for(1, 3, "proj-repl-rank")
weights = 1 / np.sqrt(np.arange(1, 4))  # a slowly decaying discount
table = {r.literal: float(np.dot(r.degrees, weights)) for r in poset.space}
pair = il.find_counterexample(table, "proj-repl-rank", 3, "isotone", scale=s1)
print("isotone failure:", *pair, [round(table[r.literal], 3) for r in pair])
