"""
Rebuilding a coverage function from structured samples
=======================================================

A hidden bipartite graph is observed only through samples ``(S, N(S))``.
Intersecting the covered sets a node took part in gives a surrogate graph
that always contains the true one.
"""

import numpy as np

from opss import (UniformAtMostK, algorithm_general, build_surrogate,
                  coverage_value, generate_log, random_graph,
                  surrogate_error_set)

rng = np.random.default_rng(0)
g = random_graph(12, 10, 0.2, rng)
print("true adjacency:", g.adjacency)

# a handful of samples leaves the surrogate loose
for t in (5, 50, 500):
    log = generate_log(g, UniformAtMostK(12, k=4), t, rng)
    s = build_surrogate(log)
    extra = int((s.graph.matrix & ~g.matrix).sum())
    print(f"t={t:4d}  extra edges={extra:3d}  "
          f"wrongly attributed right nodes={sorted(surrogate_error_set(g, s))}")

# the general algorithm tosses a coin between the first sample and greedy
out = algorithm_general(log, k=4, rng=rng)
f1, f2 = coverage_value(g, out.t1), coverage_value(g, out.t2)
print("T1 =", sorted(out.t1), "f =", f1)
print("T2 =", sorted(out.t2), "f =", f2)
print("coin expectation:", (f1 + f2) / 2)
