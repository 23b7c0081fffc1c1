"""Hard instance families paired with the sample distribution they defeat.

Right-node layout is canonical: shared or hidden-node blocks take the lowest
right indices and per-node private blocks follow in left-node order.  Every
generator returns the matching :class:`~opss.distributions.DistributionSpec`
together with the closed-form optimum under the budget ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .coverage import BipartiteGraph
from .distributions import (
    BlockPartition,
    DistributionSpec,
    HalfHardness,
    SubsetOfL2ExactK,
    UniformExactR,
)
from .errors import ValidationError

FAMILIES = ("half-hardness", "infeasible", "assumption2", "assumption3")


@dataclass(frozen=True)
class HardnessInstance:
    graph: BipartiteGraph
    dist: DistributionSpec
    hidden: Any
    opt_value: int
    family: str
    k: int

    def metadata_line(self) -> str:
        hidden = self.hidden if not isinstance(self.hidden, tuple) else ",".join(map(str, self.hidden))
        return f"family={self.family} hidden={hidden} opt_value={self.opt_value} k={self.k} dist={self.dist}"


def gen_half_hardness(n: int, k: int, r: int, hidden_i: int) -> HardnessInstance:
    """Graph ``G_i`` of the 1/2-hardness family.

    Left nodes ``[0, k-1)`` form ``L1`` and are in every sample.  Node
    ``hidden_i`` of ``L1`` covers the shared block ``[0, (k-1)r)``; other
    ``L1`` nodes cover nothing.  Each ``L2`` node owns ``r`` private right
    nodes.  The optimum is ``hidden_i`` plus any ``k-1`` nodes of ``L2``,
    worth ``2(k-1)r`` once ``n >= 2k-2``; below that ``L2`` runs out first.
    """
    if not 2 <= k <= n or r < 1:
        raise ValidationError(f"half-hardness needs 2 <= k <= n and r >= 1, got n={n}, k={k}, r={r}")
    if not 0 <= hidden_i < k - 1:
        raise ValidationError(f"hidden_i must lie in [0, {k - 1}), got {hidden_i}")
    shared = (k - 1) * r
    rows: list[range] = [range(0)] * (k - 1)
    rows[hidden_i] = range(shared)
    for j in range(n - k + 1):
        start = shared + j * r
        rows.append(range(start, start + r))
    m = shared + (n - k + 1) * r
    return HardnessInstance(
        BipartiteGraph(n, m, tuple(tuple(row) for row in rows)),
        HalfHardness(n, k),
        hidden_i,
        shared + min(k - 1, n - k + 1) * r,
        "half-hardness",
        k,
    )


def gen_infeasible_family(n: int, k: int, r: int, p: int, good_block: int, m: int | None = None) -> HardnessInstance:
    """Graph ``G_i`` for samples that are too large (uniform ``r``-subsets).

    ``L`` is cut into ``p`` consecutive blocks of ``n/p`` nodes.  Every node
    of block ``good_block`` covers all ``m`` right nodes; the rest cover
    nothing.  ``p`` is a free parameter here rather than ``r / log^2 n``.
    """
    m = n if m is None else m
    if p < 1 or n % p:
        raise ValidationError(f"p must be a positive divisor of n, got p={p}, n={n}")
    if not 0 <= good_block < p:
        raise ValidationError(f"good_block must lie in [0, {p}), got {good_block}")
    if not 1 <= k <= n or not 1 <= r <= n or m < 1:
        raise ValidationError(f"infeasible family needs 1 <= k, r <= n and m >= 1, got k={k}, r={r}, m={m}")
    q = n // p
    full = tuple(range(m))
    rows = tuple(full if u // q == good_block else () for u in range(n))
    return HardnessInstance(BipartiteGraph(n, m, rows), UniformExactR(n, r=r), good_block, m, "infeasible", k)


def intended_infeasible_regime(n: int, k: int) -> float:
    """``k * log^2 n``: the theory needs ``r`` asymptotically larger than this."""
    return k * math.log(n) ** 2


def gen_assumption2_family(n: int, m: int, hidden_u: int, k: int = 1) -> HardnessInstance:
    """Graph ``G_i`` where the only useful node is never sampled.

    Samples are ``k``-subsets of the second half of ``L``, which covers
    nothing; node ``hidden_u`` in the first half covers all of ``R``.
    """
    if n % 2 or n < 2 or m < 1:
        raise ValidationError(f"assumption2 family needs even n >= 2 and m >= 1, got n={n}, m={m}")
    if not 0 <= hidden_u < n // 2:
        raise ValidationError(f"hidden_u must lie in [0, {n // 2}), got {hidden_u}")
    full = tuple(range(m))
    rows = tuple(full if u == hidden_u else () for u in range(n))
    return HardnessInstance(BipartiteGraph(n, m, rows), SubsetOfL2ExactK(n, k), hidden_u, m, "assumption2", k)


def gen_assumption3_instance(
    n: int, k: int, r: int, rng: np.random.Generator | None = None, hidden: tuple[int, ...] | None = None
) -> HardnessInstance:
    """Random graph for block samples.

    Each block ``[jk, (j+1)k)`` has one hidden node, uniform within the block
    unless ``hidden`` pins them, owning the private right block
    ``[jr, (j+1)r)``.  The optimum takes ``min(k, n/k)`` hidden nodes.
    """
    if k < 1 or n % k or r < 1:
        raise ValidationError(f"assumption3 needs k >= 1 dividing n and r >= 1, got n={n}, k={k}, r={r}")
    blocks = n // k
    if hidden is None:
        if rng is None:
            raise ValidationError("assumption3 needs an rng or explicit hidden nodes")
        hidden = tuple(int(j * k + x) for j, x in enumerate(rng.integers(0, k, size=blocks)))
    hidden = tuple(hidden)
    if len(hidden) != blocks or any(not j * k <= h < (j + 1) * k for j, h in enumerate(hidden)):
        raise ValidationError("hidden must name one node inside each block")
    rows: list[tuple[int, ...]] = [()] * n
    for j, h in enumerate(hidden):
        rows[h] = tuple(range(j * r, (j + 1) * r))
    return HardnessInstance(
        BipartiteGraph(n, blocks * r, tuple(rows)),
        BlockPartition(n, k),
        hidden,
        min(k, blocks) * r,
        "assumption3",
        k,
    )
