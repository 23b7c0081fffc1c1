"""Structured sample logs, surrogate graphs and the OPSS algorithms.

A structured sample is a pair ``(S_i, N_G(S_i))``.  From a log of them the
surrogate graph gives every left node ``u`` the intersection of the covered
sets of the samples that contain ``u``.  A node that never appears keeps
the full right set, so the surrogate is always an edge-superset of the hidden
graph.

Three algorithms run on top of the surrogate:

* :func:`algorithm_general` returns the first sample or the solver's answer
  on the surrogate, by a fair coin.
* :func:`algorithm_uniform_k` is the variant for uniform ``k``-subset samples:
  a fresh random set of size ``floor(eps*k/2)`` joined with the solver's
  answer at budget ``floor((1 - eps/2)*k)``.
* :func:`algorithm_large_sample` handles samples larger than the budget by
  running the coin step and then downsampling the outcome to ``k`` nodes.
"""

from __future__ import annotations

import logging
import math
import os
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .coverage import BipartiteGraph, coverage_value
from .distributions import DistributionSpec, UniformExactK, draw, draw_batch, parse_distribution
from .errors import AssumptionWarning, ValidationError
from .solvers import Solver, greedy_max_coverage

logger = logging.getLogger(__name__)

LOG_MAGIC = "OPSS v1"


@dataclass(frozen=True)
class Sample:
    nodes: frozenset[int]
    covered: frozenset[int]


def _rows_to_sets(matrix: np.ndarray) -> list[frozenset[int]]:
    return [frozenset(np.flatnonzero(row).tolist()) for row in matrix]


@dataclass(frozen=True, eq=False)
class SampleLog:
    """An ordered log of structured samples plus its provenance header.

    The samples are held as two boolean matrices, ``members`` of shape
    ``(t, n_left)`` and ``covered`` of shape ``(t, n_right)``.
    """

    n_left: int
    n_right: int
    k: int
    dist: str
    seed: int | None
    members: np.ndarray
    covered: np.ndarray

    def __post_init__(self):
        members = np.asarray(self.members, dtype=bool)
        covered = np.asarray(self.covered, dtype=bool)
        if members.ndim != 2 or covered.ndim != 2 or members.shape[0] != covered.shape[0]:
            raise ValidationError("members and covered must be 2-d with one row per sample")
        if members.shape[1] != self.n_left or covered.shape[1] != self.n_right:
            raise ValidationError(
                f"sample dimensions {members.shape[1]}x{covered.shape[1]} do not match "
                f"header n={self.n_left} m={self.n_right}"
            )
        members.setflags(write=False)
        covered.setflags(write=False)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "covered", covered)

    @classmethod
    def from_samples(cls, n_left, n_right, k, dist, seed, samples: Iterable[Sample]) -> "SampleLog":
        samples = list(samples)
        members = np.zeros((len(samples), n_left), dtype=bool)
        covered = np.zeros((len(samples), n_right), dtype=bool)
        for i, s in enumerate(samples):
            for u in s.nodes:
                if not 0 <= u < n_left:
                    raise ValidationError(f"sample {i} has left index {u} outside [0, {n_left})")
                members[i, u] = True
            for v in s.covered:
                if not 0 <= v < n_right:
                    raise ValidationError(f"sample {i} has right index {v} outside [0, {n_right})")
                covered[i, v] = True
        return cls(n_left, n_right, k, str(dist), seed, members, covered)

    @property
    def t(self) -> int:
        return self.members.shape[0]

    @property
    def samples(self) -> list[Sample]:
        return [Sample(a, b) for a, b in zip(_rows_to_sets(self.members), _rows_to_sets(self.covered))]

    @property
    def sample_sizes(self) -> np.ndarray:
        return self.members.sum(axis=1)

    def first(self) -> Sample:
        if not self.t:
            raise ValidationError("sample log is empty")
        return Sample(
            frozenset(np.flatnonzero(self.members[0]).tolist()),
            frozenset(np.flatnonzero(self.covered[0]).tolist()),
        )

    def prefix(self, t: int) -> "SampleLog":
        return SampleLog(self.n_left, self.n_right, self.k, self.dist, self.seed, self.members[:t], self.covered[:t])

    def extend(self, other: "SampleLog") -> "SampleLog":
        if (other.n_left, other.n_right) != (self.n_left, self.n_right):
            raise ValidationError("cannot concatenate logs of different dimensions")
        return SampleLog(
            self.n_left,
            self.n_right,
            self.k,
            self.dist,
            self.seed,
            np.vstack([self.members, other.members]),
            np.vstack([self.covered, other.covered]),
        )

    def header(self) -> str:
        seed = "none" if self.seed is None else str(self.seed)
        return (
            f"{LOG_MAGIC} n={self.n_left} m={self.n_right} k={self.k} "
            f"dist={self.dist} seed={seed} t={self.t}"
        )

    def to_text(self) -> str:
        lines = [self.header()]
        for nodes_row, cov_row in zip(self.members, self.covered):
            s = "".join(f" {u}" for u in np.flatnonzero(nodes_row))
            c = "".join(f" {v}" for v in np.flatnonzero(cov_row))
            lines.append(f"S:{s} | N:{c}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SampleLog":
        lines = text.splitlines()
        if not lines or not lines[0].startswith(LOG_MAGIC + " "):
            raise ValidationError(f"sample log must start with {LOG_MAGIC!r}")
        head = _parse_header(lines[0][len(LOG_MAGIC) + 1 :])
        samples = []
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            left, sep, right = line.partition("|")
            left, right = left.strip(), right.strip()
            if not sep or not left.startswith("S:") or not right.startswith("N:"):
                raise ValidationError(f"line {lineno}: expected 'S: ... | N: ...'")
            try:
                nodes = frozenset(int(x) for x in left[2:].split())
                cov = frozenset(int(x) for x in right[2:].split())
            except ValueError:
                raise ValidationError(f"line {lineno}: non-integer node index") from None
            samples.append(Sample(nodes, cov))
        if head["t"] is not None and head["t"] != len(samples):
            raise ValidationError(f"header declares t={head['t']} but the file has {len(samples)} samples")
        return cls.from_samples(head["n"], head["m"], head["k"], head["dist"], head["seed"], samples)


def _parse_header(rest: str) -> dict:
    tokens = rest.split()
    out: dict = {"t": None, "seed": None}
    dist_tokens: list[str] | None = None
    for tok in tokens:
        key, _, value = tok.partition("=")
        if dist_tokens is not None and key not in ("seed", "t"):
            dist_tokens.append(tok)
            continue
        if key == "dist":
            dist_tokens = [value]
        elif key in ("n", "m", "k", "t"):
            try:
                out[key] = int(value)
            except ValueError:
                raise ValidationError(f"header field {key} must be an integer") from None
        elif key == "seed":
            out["seed"] = None if value.lower() == "none" else int(value)
        else:
            raise ValidationError(f"unknown header field {tok!r}")
    for key in ("n", "m", "k"):
        if key not in out:
            raise ValidationError(f"sample log header is missing {key}=")
    out["dist"] = " ".join(dist_tokens) if dist_tokens else ""
    return out


def read_log(path: str | os.PathLike) -> SampleLog:
    with open(path, encoding="ascii") as fh:
        return SampleLog.from_text(fh.read())


def write_log(log: SampleLog, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(log.to_text())


def covered_matrix(g: BipartiteGraph, members: np.ndarray) -> np.ndarray:
    """Row i is the indicator of ``N_G(S_i)`` for membership row ``members[i]``."""
    return (members.astype(np.int32) @ g.matrix.astype(np.int32)) > 0


def generate_log(
    g: BipartiteGraph,
    spec: DistributionSpec,
    t: int,
    rng: np.random.Generator,
    k: int | None = None,
    seed: int | None = None,
) -> SampleLog:
    """Draw ``t`` samples from ``spec`` and record what each covers in ``g``."""
    if spec.n != g.n_left:
        raise ValidationError(f"distribution is over {spec.n} nodes but the graph has {g.n_left}")
    members = draw_batch(spec, rng, t)
    covered = covered_matrix(g, members)
    if t:
        first = np.flatnonzero(members[0]).tolist()
        assert covered[0].sum() == coverage_value(g, first)
    return SampleLog(
        g.n_left, g.n_right, spec.feasible_bound if k is None else k, spec.to_string(), seed, members, covered
    )


@dataclass(frozen=True)
class Surrogate:
    graph: BipartiteGraph
    appearance_counts: tuple[int, ...]

    @property
    def unsampled(self) -> tuple[int, ...]:
        return tuple(u for u, c in enumerate(self.appearance_counts) if c == 0)


def build_surrogate(log: SampleLog) -> Surrogate:
    """Intersect, for each left node, the covered sets of the samples containing it."""
    members = log.members.astype(np.int32)
    # misses[u, v] counts samples containing u whose covered set lacks v
    misses = members.T @ (~log.covered).astype(np.int32)
    graph = BipartiteGraph.from_matrix(misses == 0)
    counts = tuple(int(c) for c in members.sum(axis=0))
    surrogate = Surrogate(graph, counts)
    if surrogate.unsampled:
        logger.info(
            "%d left node(s) never sampled; their surrogate neighborhood is all of R",
            len(surrogate.unsampled),
        )
    return surrogate


def surrogate_error_set(g_true: BipartiteGraph, s: Surrogate) -> frozenset[int]:
    """Right nodes wrongly attributed to some left node: the union of ``N~(u) - N(u)``."""
    if (g_true.n_left, g_true.n_right) != (s.graph.n_left, s.graph.n_right):
        raise ValidationError("surrogate and true graph dimensions differ")
    extra = (s.graph.matrix & ~g_true.matrix).any(axis=0)
    return frozenset(np.flatnonzero(extra).tolist())


@dataclass(frozen=True)
class OpssOutcome:
    """Candidates and the returned set of one OPSS run.

    ``coin`` is ``"t1"`` or ``"t2"`` for the coin-flip algorithms and
    ``None`` for :func:`algorithm_uniform_k`.
    """

    t1: frozenset[int]
    t2: frozenset[int]
    returned: frozenset[int]
    coin: str | None
    surrogate_value_of_t2: int
    surrogate: Surrogate = field(repr=False, compare=False)


def _check_k(log: SampleLog, k: int) -> None:
    if not 1 <= k <= log.n_left:
        raise ValidationError(f"k must lie in [1, {log.n_left}], got {k}")
    if not log.t:
        raise ValidationError("sample log is empty")


def _coin_step(log: SampleLog, k: int, solver: Solver, rng: np.random.Generator) -> OpssOutcome:
    surrogate = build_surrogate(log)
    t1 = log.first().nodes
    result = solver(surrogate.graph, k)
    # the coin comes last so both candidates are independent of it
    coin = "t1" if rng.random() < 0.5 else "t2"
    returned = t1 if coin == "t1" else result.chosen
    return OpssOutcome(t1, result.chosen, returned, coin, result.value, surrogate)


def algorithm_general(
    log: SampleLog,
    k: int,
    solver: Solver = greedy_max_coverage,
    rng: np.random.Generator | None = None,
) -> OpssOutcome:
    """Fair coin between the first sample and ``solver`` applied to the surrogate."""
    _check_k(log, k)
    if int(log.sample_sizes.max()) > k:
        warnings.warn(f"samples larger than k={k} present; the first sample may be infeasible", AssumptionWarning)
    return _coin_step(log, k, solver, rng if rng is not None else np.random.default_rng())


def _as_fraction(eps) -> Fraction:
    return Fraction(str(eps)) if isinstance(eps, float) else Fraction(eps)


def uniform_k_budgets(k: int, eps) -> tuple[int, int]:
    """``(floor(eps*k/2), floor((1 - eps/2)*k))``, computed in exact arithmetic."""
    e = _as_fraction(eps)
    if not 0 < e < 1:
        raise ValidationError(f"eps must lie in (0, 1), got {eps}")
    return math.floor(e * k / 2), math.floor((1 - e / 2) * k)


def _warn_uniform_k_hypotheses(log: SampleLog, k: int, eps) -> None:
    try:
        spec = parse_distribution(log.dist)
    except ValidationError:
        spec = None
    if type(spec) is not UniformExactK or spec.k != k:
        warnings.warn(f"log was not generated under uniform-exact-k with k={k} (header: {log.dist!r})", AssumptionWarning)
    n, m = log.n_left, log.n_right
    ln_n = math.log(n) if n > 1 else 0.0
    e = float(eps)
    if not (ln_n**2 <= k <= n / 2) or m > (e / 2) * n ** (e * ln_n / 8):
        warnings.warn(
            f"n={n}, m={m}, k={k}, eps={eps} is outside ln^2 n <= k <= n/2, m <= (eps/2) n^(eps ln n / 8)",
            AssumptionWarning,
        )


def algorithm_uniform_k(
    log: SampleLog,
    k: int,
    eps,
    solver: Solver = greedy_max_coverage,
    rng: np.random.Generator | None = None,
) -> OpssOutcome:
    """Union of a fresh uniform ``floor(eps*k/2)``-subset and the solver's surrogate answer."""
    _check_k(log, k)
    small, large = uniform_k_budgets(k, eps)
    if small == 0:
        raise ValidationError(
            f"floor(eps*k/2) = 0 for eps={eps}, k={k}; increase eps*k to at least 2"
        )
    _warn_uniform_k_hypotheses(log, k, eps)
    rng = rng if rng is not None else np.random.default_rng()
    surrogate = build_surrogate(log)
    result = solver(surrogate.graph, large)
    t1 = draw(UniformExactK(log.n_left, small), rng)
    return OpssOutcome(t1, result.chosen, t1 | result.chosen, None, result.value, surrogate)


def uniform_subset(nodes: Iterable[int], size: int, rng: np.random.Generator) -> frozenset[int]:
    """Uniform ``size``-subset of ``nodes`` (without replacement)."""
    pool = sorted(nodes)
    if size >= len(pool):
        return frozenset(pool)
    picks = rng.choice(len(pool), size=size, replace=False)
    return frozenset(pool[i] for i in picks)


def algorithm_large_sample(
    log: SampleLog,
    k: int,
    solver: Solver = greedy_max_coverage,
    rng: np.random.Generator | None = None,
) -> OpssOutcome:
    """Coin step on samples of size ``r >= k``, then downsample the pick to ``k`` nodes."""
    _check_k(log, k)
    sizes = log.sample_sizes
    if sizes.min() != sizes.max() or int(sizes[0]) < k:
        warnings.warn("large-sample variant expects all samples to share one size r >= k", AssumptionWarning)
    rng = rng if rng is not None else np.random.default_rng()
    base = _coin_step(log, k, solver, rng)
    if len(base.returned) <= k:
        return base
    return OpssOutcome(
        base.t1, base.t2, uniform_subset(base.returned, k, rng), base.coin, base.surrogate_value_of_t2, base.surrogate
    )


ALGORITHMS = ("general", "uniform-k", "large-sample")


def run_algorithm(
    name: str,
    log: SampleLog,
    k: int,
    solver: Solver,
    rng: np.random.Generator,
    eps=None,
) -> OpssOutcome:
    if name == "general":
        return algorithm_general(log, k, solver, rng)
    if name == "uniform-k":
        if eps is None:
            raise ValidationError("uniform-k needs eps")
        return algorithm_uniform_k(log, k, eps, solver, rng)
    if name == "large-sample":
        return algorithm_large_sample(log, k, solver, rng)
    raise ValidationError(f"unknown algorithm {name!r}; expected one of {ALGORITHMS}")


def downsample_average(g: BipartiteGraph, t1: Sequence[int], k: int) -> Fraction:
    """Exact mean of ``f(T)`` over all ``k``-subsets ``T`` of ``t1``."""
    combos = list(combinations(sorted(t1), k))
    return Fraction(sum(coverage_value(g, c) for c in combos), len(combos))
