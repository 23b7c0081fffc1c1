"""
Greedy against brute force
==========================

On small graphs exhaustive search gives the true optimum, so the classical
``1 - 1/e`` guarantee of greedy can be seen directly.
"""

import math

import numpy as np

from opss import (exhaustive_max_coverage, greedy_max_coverage,
                  lazy_greedy_max_coverage, random_graph)

rng = np.random.default_rng(1)
ratios = []
for _ in range(100):
    g = random_graph(10, 12, 0.25, rng)
    opt = exhaustive_max_coverage(g, 3).value
    if opt:
        ratios.append(greedy_max_coverage(g, 3).value / opt)
ratios = np.array(ratios)
print(f"worst {ratios.min():.3f}  mean {ratios.mean():.3f}  bound {1 - 1 / math.e:.3f}")

# lazy evaluation returns the same set with far fewer gain evaluations
g = random_graph(300, 400, 0.03, rng)
eager, lazy = greedy_max_coverage(g, 25), lazy_greedy_max_coverage(g, 25)
print("same set:", eager.chosen == lazy.chosen)
print("evaluations eager/lazy:", eager.evaluations, lazy.evaluations)
