"""Judged runs, their orderings, and what kind of order each one is."""
import numpy as np

import irlattice as il

# %% a graded scale: non-relevant, relevant, highly relevant
scale = il.make_scale(2)
ranks = il.enumerate_runs(scale, 3, "rank")
sets = il.enumerate_runs(scale, 3, "set")
print(len(ranks), "rank-based runs,", len(sets), "set-based runs")
print("sets:", " ".join(str(r) for r in sets))

# %% order matrices are plain boolean arrays
for ordering in il.Ordering:
    space = sets if ordering.kind is il.RunKind.SET else ranks
    m = il.leq_matrix(ordering, space)
    comparable = (m | m.T).mean()
    print(f"{ordering.value:15s} {len(space):3d} runs  comparable pairs {comparable:.2f}")

# %% the two projection orderings are chains; rank runs read as base-3 numbers
poset, chain = il.structure_for(2, 3, "proj-repl-rank")
position = poset.leq.sum(axis=0) - 1
digits = ranks.degree_array()
print("chain position == base-3 value:", (position == digits @ [9, 3, 1]).all())

# %% replacement orderings are products of chains, hence distributive
for name in ("repl-set", "repl-rank"):
    poset, tables = il.structure_for(2, 3, name)
    v = tables.verdict
    jis = [poset.literal(j) for j in v.join_irreducibles]
    print(name, "distributive:", v.is_distributive, "join-irreducibles:", jis)

# %% swapping: binary runs give a distributive lattice, graded runs break it
for c in (1, 2):
    poset, tables = il.structure_for(c, 3, "swap-repl-rank")
    v = il.analyze(poset)
    print(f"swap c={c}: lattice={v.is_lattice} distributive={v.is_distributive}")
    if v.non_lattice is not None:
        print("   ", v.non_lattice.describe(poset))

# %% Hasse diagram of the smallest interesting case, ready for `dot -Tpng`
poset, _ = il.structure_for(1, 2, "repl-rank")
print(il.export_hasse(poset))
