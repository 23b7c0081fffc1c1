"""Bipartite graphs and the coverage functions they define.

A graph ``G = (L, R, E)`` is stored as one sorted adjacency tuple per left
node.  Node sets are plain ``frozenset`` objects of zero-based indices; the
side they live on is implied by the operation that consumes them.  For speed
each graph also caches a Python-int bitmask per left node and a dense boolean
incidence matrix.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from operator import or_
from typing import Iterable, Sequence

import numpy as np

from .errors import ValidationError

NodeSet = frozenset


def _bits(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph with ``n_left`` left nodes and ``n_right`` right nodes.

    ``adjacency[u]`` is the strictly increasing tuple ``N_G(u)``.
    """

    n_left: int
    n_right: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n_left < 1 or self.n_right < 1:
            raise ValidationError(
                f"graph needs n_left >= 1 and n_right >= 1, got {self.n_left}x{self.n_right}"
            )
        adjacency = tuple(tuple(int(v) for v in row) for row in self.adjacency)
        if len(adjacency) != self.n_left:
            raise ValidationError(
                f"adjacency has {len(adjacency)} rows for n_left={self.n_left}"
            )
        for u, row in enumerate(adjacency):
            for a, b in zip(row, row[1:]):
                if a >= b:
                    raise ValidationError(f"adjacency of left node {u} is not strictly increasing")
            if row and (row[0] < 0 or row[-1] >= self.n_right):
                raise ValidationError(f"adjacency of left node {u} leaves [0, {self.n_right})")
        object.__setattr__(self, "adjacency", adjacency)

    @classmethod
    def from_sets(cls, n_right: int, neighborhoods: Sequence[Iterable[int]]) -> "BipartiteGraph":
        """Build a graph from arbitrary iterables; duplicates are dropped and rows sorted."""
        rows = tuple(tuple(sorted(set(int(v) for v in nb))) for nb in neighborhoods)
        return cls(len(rows), n_right, rows)

    @classmethod
    def from_matrix(cls, matrix) -> "BipartiteGraph":
        """Build a graph from an ``(n_left, n_right)`` 0/1 incidence matrix."""
        m = np.asarray(matrix, dtype=bool)
        if m.ndim != 2:
            raise ValidationError("incidence matrix must be two-dimensional")
        rows = tuple(tuple(np.flatnonzero(row).tolist()) for row in m)
        return cls(m.shape[0], m.shape[1], rows)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << v for v in row) for row in self.adjacency)

    @cached_property
    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n_left, self.n_right), dtype=bool)
        for u, row in enumerate(self.adjacency):
            m[u, list(row)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def right_degrees(self) -> np.ndarray:
        d = self.matrix.sum(axis=0)
        d.setflags(write=False)
        return d

    def neighborhood(self, u: int) -> frozenset[int]:
        _check_left(self, u)
        return frozenset(self.adjacency[u])

    def relabel_right(self, permutation: Sequence[int]) -> "BipartiteGraph":
        """Return the graph with right node ``v`` renamed to ``permutation[v]``."""
        perm = list(permutation)
        if sorted(perm) != list(range(self.n_right)):
            raise ValidationError("permutation must be a rearrangement of range(n_right)")
        return BipartiteGraph.from_sets(
            self.n_right, [[perm[v] for v in row] for row in self.adjacency]
        )

    def to_text(self) -> str:
        lines = [f"{self.n_left} {self.n_right}"]
        lines.extend(" ".join(map(str, row)) for row in self.adjacency)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BipartiteGraph":
        lines = text.splitlines()
        if not lines:
            raise ValidationError("empty graph file")
        head = lines[0].split()
        if len(head) != 2:
            raise ValidationError("graph header must be '<n_left> <n_right>'")
        try:
            n_left, n_right = int(head[0]), int(head[1])
            rows = [[int(tok) for tok in line.split()] for line in lines[1:]]
        except ValueError as exc:
            raise ValidationError(f"malformed graph file: {exc}") from None
        if len(rows) > n_left:
            if any(rows[n_left:]):
                raise ValidationError(f"graph file has more than {n_left} adjacency lines")
            rows = rows[:n_left]
        # trailing empty adjacency lines may have been stripped by an editor
        rows.extend([] for _ in range(n_left - len(rows)))
        if n_left < 1:
            raise ValidationError("graph needs n_left >= 1")
        return cls.from_sets(n_right, rows)


def _check_left(g: BipartiteGraph, u: int) -> None:
    if not 0 <= u < g.n_left:
        raise ValidationError(f"left index {u} out of range [0, {g.n_left})")


def _check_left_set(g: BipartiteGraph, s: Iterable[int]) -> None:
    for u in s:
        _check_left(g, u)


def read_graph(path: str | os.PathLike) -> BipartiteGraph:
    with open(path, encoding="ascii") as fh:
        return BipartiteGraph.from_text(fh.read())


def write_graph(g: BipartiteGraph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(g.to_text())


def random_graph(n_left: int, n_right: int, edge_prob: float, rng: np.random.Generator) -> BipartiteGraph:
    """Erdos-Renyi bipartite graph: every edge present independently with ``edge_prob``."""
    if not 0.0 <= edge_prob <= 1.0:
        raise ValidationError(f"edge_prob must lie in [0, 1], got {edge_prob}")
    return BipartiteGraph.from_matrix(rng.random((n_left, n_right)) < edge_prob)


def neighbor_mask(g: BipartiteGraph, s: Iterable[int]) -> int:
    masks = g.masks
    out = 0
    for u in s:
        _check_left(g, u)
        out |= masks[u]
    return out


def neighbors(g: BipartiteGraph, s: Iterable[int]) -> frozenset[int]:
    """Return ``N_G(S)``, the union of the neighborhoods of the left nodes in ``s``."""
    return _bits(neighbor_mask(g, s))


def coverage_value(g: BipartiteGraph, s: Iterable[int]) -> int:
    """Return ``f_G(S) = |N_G(S)|``."""
    return neighbor_mask(g, s).bit_count()


def marginal_gain(g: BipartiteGraph, s: Iterable[int], covered: Iterable[int], u: int) -> int:
    """Number of right nodes ``u`` adds on top of ``covered``.

    ``covered`` must equal ``neighbors(g, s)``; ``s`` itself is validated but
    only ``covered`` enters the computation.
    """
    _check_left_set(g, s)
    _check_left(g, u)
    cov = reduce(or_, (1 << v for v in covered), 0)
    return (g.masks[u] & ~cov).bit_count()


def degree_right(g: BipartiteGraph, v: int) -> int:
    """Return ``d(v)``, the number of left nodes adjacent to right node ``v``."""
    if not 0 <= v < g.n_right:
        raise ValidationError(f"right index {v} out of range [0, {g.n_right})")
    return int(g.right_degrees[v])


def coverage_probability_exact(n: int, k: int, d: int, exact: bool = False):
    """Probability that a uniform ``k``-subset of ``n`` left nodes hits ``d`` given ones.

    Computes ``1 - C(n-d, k) / C(n, k)`` as the running product
    ``prod_{i<k} (n-d-i)/(n-i)``, which is exactly zero once ``n - d < k``.
    With ``exact=True`` the result is a :class:`fractions.Fraction`.
    """
    if not (0 <= d <= n and 1 <= k <= n):
        raise ValidationError(f"need 0 <= d <= n and 1 <= k <= n, got n={n}, k={k}, d={d}")
    if exact:
        miss = Fraction(1)
        for i in range(k):
            miss *= Fraction(max(n - d - i, 0), n - i)
        return 1 - miss
    miss = 1.0
    for i in range(k):
        if n - d - i <= 0:
            return 1.0
        miss *= (n - d - i) / (n - i)
    return 1.0 - miss
