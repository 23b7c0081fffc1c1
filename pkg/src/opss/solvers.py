"""Maximum coverage solvers under a cardinality budget.

Any callable ``solver(graph, budget) -> SolverResult`` can be plugged into the
OPSS algorithms; :data:`SOLVERS` maps the CLI names to the built-in ones.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from .coverage import BipartiteGraph
from .errors import CapacityError, ValidationError

DEFAULT_EXHAUSTIVE_CAP = 10**7


@dataclass(frozen=True)
class SolverResult:
    chosen: frozenset[int]
    value: int
    evaluations: int


Solver = Callable[[BipartiteGraph, int], SolverResult]


def _check_budget(g: BipartiteGraph, budget: int) -> None:
    if not 1 <= budget <= g.n_left:
        raise ValidationError(f"budget must lie in [1, {g.n_left}], got {budget}")


def greedy_max_coverage(g: BipartiteGraph, budget: int) -> SolverResult:
    """Standard greedy: repeatedly add the node of largest marginal gain.

    Ties go to the lowest left index and the loop stops as soon as the best
    gain is zero, so the returned set may be smaller than ``budget``.
    """
    _check_budget(g, budget)
    masks = g.masks
    covered = 0
    chosen: list[int] = []
    taken = [False] * g.n_left
    evaluations = 0
    for _ in range(budget):
        best_gain, best_u = 0, -1
        for u in range(g.n_left):
            if taken[u]:
                continue
            evaluations += 1
            gain = (masks[u] & ~covered).bit_count()
            if gain > best_gain:
                best_gain, best_u = gain, u
        if best_gain == 0:
            break
        taken[best_u] = True
        chosen.append(best_u)
        covered |= masks[best_u]
    return SolverResult(frozenset(chosen), covered.bit_count(), evaluations)


def lazy_greedy_max_coverage(g: BipartiteGraph, budget: int) -> SolverResult:
    """Lazy (accelerated) greedy with the same output as :func:`greedy_max_coverage`.

    Cached gains are upper bounds by submodularity.  The heap is keyed on
    ``(-cached_gain, index)``; an entry refreshed in the current round that
    surfaces on top is the eager greedy choice, tie-break included.
    """
    _check_budget(g, budget)
    masks = g.masks
    heap = [(-m.bit_count(), u, 0) for u, m in enumerate(masks)]
    heapq.heapify(heap)
    evaluations = g.n_left
    covered = 0
    chosen: list[int] = []
    for rnd in range(budget):
        while True:
            neg_gain, u, stamp = heapq.heappop(heap)
            if stamp == rnd:
                break
            evaluations += 1
            heapq.heappush(heap, (-(masks[u] & ~covered).bit_count(), u, rnd))
        if neg_gain == 0:
            break
        chosen.append(u)
        covered |= masks[u]
        if not heap:
            break
    return SolverResult(frozenset(chosen), covered.bit_count(), evaluations)


def exhaustive_max_coverage(g: BipartiteGraph, budget: int, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> SolverResult:
    """Exact optimum over all sets of size at most ``budget``.

    Sets are visited depth-first in lexicographic order of their sorted
    index tuples, and only strict improvements replace the incumbent, so the
    lexicographically smallest optimum is returned.
    """
    _check_budget(g, budget)
    count = math.comb(g.n_left, budget)
    if count > cap:
        raise CapacityError(
            f"exhaustive search over C({g.n_left}, {budget}) = {count} sets exceeds the cap of {cap}",
            cap,
        )
    masks = g.masks
    n = g.n_left
    best: list = [0, ()]  # value, chosen
    evaluations = 0
    stack: list[int] = []

    def visit(start: int, cov: int) -> None:
        nonlocal evaluations
        evaluations += 1
        value = cov.bit_count()
        if value > best[0]:
            best[0], best[1] = value, tuple(stack)
        if len(stack) == budget:
            return
        for u in range(start, n):
            stack.append(u)
            visit(u + 1, cov | masks[u])
            stack.pop()

    visit(0, 0)
    return SolverResult(frozenset(best[1]), best[0], evaluations)


SOLVERS: dict[str, Solver] = {
    "greedy": greedy_max_coverage,
    "lazy": lazy_greedy_max_coverage,
    "exact": exhaustive_max_coverage,
}


def get_solver(name: str) -> Solver:
    try:
        return SOLVERS[name]
    except KeyError:
        raise ValidationError(f"unknown solver {name!r}; expected one of {sorted(SOLVERS)}") from None
