"""Sampling distributions over subsets of the left node set ``L``.

Every distribution is an immutable dataclass carrying the ground-set size
``n``.  The concrete families are

========================  ===========================  ==================
class                     text form                    support
========================  ===========================  ==================
``UniformExactK``         ``uniform-exact-k n= k=``    all k-subsets
``UniformAtMostK``        ``uniform-at-most-k n= k=``  all subsets of size <= k, incl. the empty set
``UniformExactR``         ``uniform-exact-r n= r=``    all r-subsets (r may exceed the budget)
``HalfHardness``          ``half-hardness n= k=``      ``{0..k-2}`` plus one node of ``[k-1, n)``
``BlockPartition``        ``block-partition n= k=``    one of the n/k consecutive blocks
``SubsetOfL2ExactK``      ``subset-of-l2-exact-k n= k=``  k-subsets of ``[n/2, n)``
========================  ===========================  ==================

plus :class:`FiniteDistribution`, an explicit list of atoms used for tests.

Samples come out either as ``frozenset`` (:func:`draw`) or as rows of a
boolean ``(t, n)`` matrix (:func:`draw_batch`); both are driven by an explicit
:class:`numpy.random.Generator` so callers control the streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import ClassVar, Iterator

import numpy as np

from .errors import CapacityError, ValidationError

DEFAULT_SUPPORT_CAP = 10**6
DEFAULT_MAX_CHECK_N = 10
FLOAT_TOL = 1e-12


def _uniform_rows(rng: np.random.Generator, t: int, n: int, sizes) -> np.ndarray:
    """Boolean ``(t, n)`` matrix whose row i is a uniform ``sizes[i]``-subset."""
    if n == 0:
        return np.zeros((t, 0), dtype=bool)
    ranks = rng.random((t, n)).argsort(axis=1).argsort(axis=1)
    return ranks < np.asarray(sizes).reshape(-1, 1)


@dataclass(frozen=True)
class DistributionSpec:
    """Base class; subclasses define the support and a sampler."""

    n: int
    kind: ClassVar[str] = ""
    params: ClassVar[tuple[str, ...]] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"ground set size n must be >= 1, got {self.n}")
        self._validate()

    def _validate(self):
        pass

    @property
    def feasible_bound(self) -> int:
        """Largest possible sample size."""
        raise NotImplementedError

    def support_size(self) -> int:
        raise NotImplementedError

    def atoms(self) -> Iterator[tuple[frozenset[int], Fraction]]:
        raise NotImplementedError

    def sample_matrix(self, rng: np.random.Generator, t: int) -> np.ndarray:
        raise NotImplementedError

    def inclusion(self, u: int) -> Fraction:
        raise NotImplementedError

    def to_string(self) -> str:
        if not self.kind:
            raise ValidationError(f"{type(self).__name__} has no text form")
        parts = [self.kind, f"n={self.n}"]
        parts += [f"{p}={getattr(self, p)}" for p in self.params]
        return " ".join(parts)

    def __str__(self):
        try:
            return self.to_string()
        except ValidationError:
            return repr(self)


@dataclass(frozen=True)
class UniformExactK(DistributionSpec):
    k: int = 1
    kind: ClassVar[str] = "uniform-exact-k"
    params: ClassVar[tuple[str, ...]] = ("k",)

    def _validate(self):
        if not 0 <= self.k <= self.n:
            raise ValidationError(f"{self.kind} needs 0 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def size(self) -> int:
        return self.k

    @property
    def feasible_bound(self):
        return self.size

    def support_size(self):
        return math.comb(self.n, self.size)

    def atoms(self):
        p = Fraction(1, self.support_size())
        for combo in combinations(range(self.n), self.size):
            yield frozenset(combo), p

    def sample_matrix(self, rng, t):
        return _uniform_rows(rng, t, self.n, np.full(t, self.size))

    def inclusion(self, u):
        return Fraction(self.size, self.n)


@dataclass(frozen=True)
class UniformExactR(UniformExactK):
    """Uniform over r-subsets; same law as :class:`UniformExactK`, named for r > k use."""

    k: int = field(default=0, repr=False)
    r: int = 1
    kind: ClassVar[str] = "uniform-exact-r"
    params: ClassVar[tuple[str, ...]] = ("r",)

    def _validate(self):
        if not 0 <= self.r <= self.n:
            raise ValidationError(f"{self.kind} needs 0 <= r <= n, got r={self.r}, n={self.n}")

    @property
    def size(self):
        return self.r


@dataclass(frozen=True)
class UniformAtMostK(DistributionSpec):
    k: int = 1
    kind: ClassVar[str] = "uniform-at-most-k"
    params: ClassVar[tuple[str, ...]] = ("k",)

    def _validate(self):
        if not 0 <= self.k <= self.n:
            raise ValidationError(f"{self.kind} needs 0 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def feasible_bound(self):
        return self.k

    def support_size(self):
        return sum(math.comb(self.n, j) for j in range(self.k + 1))

    def atoms(self):
        p = Fraction(1, self.support_size())
        for j in range(self.k + 1):
            for combo in combinations(range(self.n), j):
                yield frozenset(combo), p

    def sample_matrix(self, rng, t):
        # size-stratified: pick |S| = j with weight C(n, j), then a uniform j-subset
        weights = np.array([math.comb(self.n, j) for j in range(self.k + 1)], dtype=float)
        sizes = rng.choice(self.k + 1, size=t, p=weights / weights.sum())
        return _uniform_rows(rng, t, self.n, sizes)

    def inclusion(self, u):
        hits = sum(math.comb(self.n - 1, j - 1) for j in range(1, self.k + 1))
        return Fraction(hits, self.support_size())


@dataclass(frozen=True)
class HalfHardness(DistributionSpec):
    """Always the prefix ``[0, k-1)`` plus one node drawn uniformly from ``[k-1, n)``."""

    k: int = 2
    kind: ClassVar[str] = "half-hardness"
    params: ClassVar[tuple[str, ...]] = ("k",)

    def _validate(self):
        if not 2 <= self.k <= self.n:
            raise ValidationError(f"{self.kind} needs 2 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def feasible_bound(self):
        return self.k

    def support_size(self):
        return self.n - self.k + 1

    def atoms(self):
        prefix = frozenset(range(self.k - 1))
        p = Fraction(1, self.support_size())
        for w in range(self.k - 1, self.n):
            yield prefix | {w}, p

    def sample_matrix(self, rng, t):
        out = np.zeros((t, self.n), dtype=bool)
        out[:, : self.k - 1] = True
        out[np.arange(t), rng.integers(self.k - 1, self.n, size=t)] = True
        return out

    def inclusion(self, u):
        return Fraction(1) if u < self.k - 1 else Fraction(1, self.n - self.k + 1)


@dataclass(frozen=True)
class BlockPartition(DistributionSpec):
    """One of the blocks ``[jk, (j+1)k)`` chosen uniformly."""

    k: int = 1
    kind: ClassVar[str] = "block-partition"
    params: ClassVar[tuple[str, ...]] = ("k",)

    def _validate(self):
        if self.k < 1 or self.n % self.k:
            raise ValidationError(f"{self.kind} needs k >= 1 dividing n, got k={self.k}, n={self.n}")

    @property
    def feasible_bound(self):
        return self.k

    @property
    def num_blocks(self) -> int:
        return self.n // self.k

    def support_size(self):
        return self.num_blocks

    def atoms(self):
        p = Fraction(1, self.num_blocks)
        for j in range(self.num_blocks):
            yield frozenset(range(j * self.k, (j + 1) * self.k)), p

    def sample_matrix(self, rng, t):
        blocks = rng.integers(0, self.num_blocks, size=t)
        return (np.arange(self.n) // self.k)[None, :] == blocks[:, None]

    def inclusion(self, u):
        return Fraction(self.k, self.n)


@dataclass(frozen=True)
class SubsetOfL2ExactK(DistributionSpec):
    """Uniform k-subsets of the second half ``[n/2, n)``; the first half is never sampled."""

    k: int = 1
    kind: ClassVar[str] = "subset-of-l2-exact-k"
    params: ClassVar[tuple[str, ...]] = ("k",)

    def _validate(self):
        if self.n % 2 or not 0 <= self.k <= self.n // 2:
            raise ValidationError(
                f"{self.kind} needs even n and 0 <= k <= n/2, got k={self.k}, n={self.n}"
            )

    @property
    def feasible_bound(self):
        return self.k

    @property
    def half(self) -> int:
        return self.n // 2

    def support_size(self):
        return math.comb(self.half, self.k)

    def atoms(self):
        p = Fraction(1, self.support_size())
        for combo in combinations(range(self.half, self.n), self.k):
            yield frozenset(combo), p

    def sample_matrix(self, rng, t):
        out = np.zeros((t, self.n), dtype=bool)
        out[:, self.half :] = _uniform_rows(rng, t, self.half, np.full(t, self.k))
        return out

    def inclusion(self, u):
        return Fraction(0) if u < self.half else Fraction(self.k, self.half)


@dataclass(frozen=True)
class FiniteDistribution(DistributionSpec):
    """Explicit distribution given as ``(subset, probability)`` atoms.

    Probabilities may be floats or Fractions; duplicates are merged.
    """

    support_atoms: tuple = ()

    def _validate(self):
        merged: dict[frozenset[int], Fraction] = {}
        for s, p in self.support_atoms:
            s = frozenset(int(u) for u in s)
            if any(not 0 <= u < self.n for u in s):
                raise ValidationError("atom leaves the ground set")
            p = Fraction(p)
            if p < 0:
                raise ValidationError("negative atom probability")
            if p:
                merged[s] = merged.get(s, Fraction(0)) + p
        total = sum(merged.values(), Fraction(0))
        if abs(float(total) - 1.0) > FLOAT_TOL:
            raise ValidationError(f"atom probabilities sum to {float(total)}, not 1")
        object.__setattr__(self, "support_atoms", tuple(sorted(merged.items(), key=lambda a: sorted(a[0]))))

    @classmethod
    def product(cls, probs) -> "FiniteDistribution":
        """Independent inclusion of node u with probability ``probs[u]``."""
        probs = [Fraction(p) for p in probs]
        n = len(probs)
        atoms = []
        for mask in range(1 << n):
            p = Fraction(1)
            for u in range(n):
                p *= probs[u] if mask >> u & 1 else 1 - probs[u]
            atoms.append((frozenset(u for u in range(n) if mask >> u & 1), p))
        return cls(n, tuple(atoms))

    @property
    def feasible_bound(self):
        return max((len(s) for s, _ in self.support_atoms), default=0)

    def support_size(self):
        return len(self.support_atoms)

    def atoms(self):
        yield from self.support_atoms

    def sample_matrix(self, rng, t):
        probs = np.array([float(p) for _, p in self.support_atoms])
        picks = rng.choice(len(probs), size=t, p=probs / probs.sum())
        table = np.zeros((len(probs), self.n), dtype=bool)
        for i, (s, _) in enumerate(self.support_atoms):
            table[i, list(s)] = True
        return table[picks]

    def inclusion(self, u):
        return sum((p for s, p in self.support_atoms if u in s), Fraction(0))


_KINDS = {
    cls.kind: cls
    for cls in (UniformExactK, UniformAtMostK, UniformExactR, HalfHardness, BlockPartition, SubsetOfL2ExactK)
}


def parse_distribution(text: str) -> DistributionSpec:
    """Parse the one-line text form, e.g. ``"half-hardness n=50 k=11"`` (case-insensitive)."""
    tokens = text.strip().lower().split()
    if not tokens or tokens[0] not in _KINDS:
        raise ValidationError(f"unknown distribution {text!r}; expected one of {sorted(_KINDS)}")
    cls = _KINDS[tokens[0]]
    kwargs = {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep or key not in ("n",) + cls.params:
            raise ValidationError(f"bad parameter {tok!r} for {cls.kind}")
        try:
            kwargs[key] = int(value)
        except ValueError:
            raise ValidationError(f"parameter {key} must be an integer, got {value!r}") from None
    missing = {"n", *cls.params} - kwargs.keys()
    if missing:
        raise ValidationError(f"{cls.kind} is missing {sorted(missing)}")
    return cls(**kwargs)


def draw_batch(spec: DistributionSpec, rng: np.random.Generator, t: int) -> np.ndarray:
    """Draw ``t`` i.i.d. samples as a boolean ``(t, spec.n)`` membership matrix."""
    if t < 0:
        raise ValidationError("sample count must be non-negative")
    return spec.sample_matrix(rng, t)


def draw(spec: DistributionSpec, rng: np.random.Generator) -> frozenset[int]:
    """Draw one sample."""
    return frozenset(np.flatnonzero(spec.sample_matrix(rng, 1)[0]).tolist())


def inclusion_probability(spec: DistributionSpec, u: int, exact: bool = False):
    """Exact ``Pr[u in S]``; a Fraction when ``exact`` else a float."""
    if not 0 <= u < spec.n:
        raise ValidationError(f"left index {u} out of range [0, {spec.n})")
    p = spec.inclusion(u)
    return p if exact else float(p)


def min_inclusion_probability(spec: DistributionSpec, exact: bool = False):
    return min(inclusion_probability(spec, u, exact) for u in range(spec.n))


def enumerate_support(spec: DistributionSpec, cap: int = DEFAULT_SUPPORT_CAP, exact: bool = False):
    """List every ``(subset, probability)`` atom of ``spec``.

    Raises :class:`CapacityError` if the support has more than ``cap`` atoms.
    """
    size = spec.support_size()
    if size > cap:
        raise CapacityError(f"support of {spec} has {size} atoms, above the cap of {cap}", cap)
    if exact:
        return list(spec.atoms())
    return [(s, float(p)) for s, p in spec.atoms()]


@dataclass(frozen=True)
class CorrelationReport:
    """Outcome of an exhaustive inequality check.

    ``worst_violation`` is the largest signed slack (lhs minus rhs) found;
    ``witness`` is the ``(I, J)`` pair attaining it when it is a violation.
    """

    holds_everywhere: bool
    worst_violation: float | Fraction
    witness: tuple[frozenset[int], frozenset[int]] | None
    pairs_tested: int


def _absent_table(spec: DistributionSpec, max_n: int, exact: bool, cap: int) -> list:
    """``A[M] = Pr[S and M disjoint]`` for every mask ``M`` over ``[n]``."""
    n = spec.n
    if n > max_n:
        raise CapacityError(
            f"exhaustive correlation check needs n <= {max_n} (3^n pairs), got n={n}", max_n
        )
    atoms = enumerate_support(spec, cap=cap, exact=True)
    full = (1 << n) - 1
    if exact:
        z = [Fraction(0)] * (1 << n)
    else:
        z = np.zeros(1 << n)
    for s, p in atoms:
        mask = sum(1 << u for u in s)
        z[mask] += p if exact else float(p)
    # subset-sum transform: z[M] becomes Pr[S subset of M]
    if exact:
        for i in range(n):
            bit = 1 << i
            for mask in range(1 << n):
                if mask & bit:
                    z[mask] += z[mask ^ bit]
        return [z[full ^ m] for m in range(1 << n)]
    for i in range(n):
        view = z.reshape(-1, 2, 1 << i)
        view[:, 1, :] += view[:, 0, :]
    return z[full ^ np.arange(1 << n)].tolist()


def _mask_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def _finish(worst, witness, pairs, exact, tol) -> CorrelationReport:
    if not exact and abs(worst) <= tol:
        worst = 0.0
    holds = worst <= 0
    return CorrelationReport(holds, worst, None if holds else witness, pairs)


def check_negative_correlation(
    spec: DistributionSpec,
    exact: bool = False,
    max_n: int = DEFAULT_MAX_CHECK_N,
    tol: float = FLOAT_TOL,
    cap: int = DEFAULT_SUPPORT_CAP,
) -> CorrelationReport:
    """Test ``E[prod_{I+J}(1-X)] <= E[prod_I(1-X)] E[prod_J(1-X)]`` on all disjoint nonempty I, J.

    Pairs are ordered, so ``pairs_tested = 3^n - 2^(n+1) + 1``.  In float mode
    slacks within ``tol`` of zero count as equality and are reported as 0.
    """
    a = _absent_table(spec, max_n, exact, cap)
    full = (1 << spec.n) - 1
    worst = None
    witness = None
    pairs = 0
    for i_mask in range(1, full + 1):
        a_i = a[i_mask]
        comp = full ^ i_mask
        j_mask = comp
        while j_mask:
            slack = a[i_mask | j_mask] - a_i * a[j_mask]
            pairs += 1
            if worst is None or slack > worst:
                worst, witness = slack, (i_mask, j_mask)
            j_mask = (j_mask - 1) & comp
    if worst is None:
        worst = Fraction(0) if exact else 0.0
    else:
        witness = (_mask_set(witness[0]), _mask_set(witness[1]))
    return _finish(worst, witness, pairs, exact, tol)


def check_conditional_lemma(
    spec: DistributionSpec,
    exact: bool = False,
    max_n: int = DEFAULT_MAX_CHECK_N,
    tol: float = FLOAT_TOL,
    cap: int = DEFAULT_SUPPORT_CAP,
) -> CorrelationReport:
    """Test ``Pr[any X_i = 1, i in I | X_j = 1] <= Pr[any X_i = 1, i in I]``.

    Runs over every ``I`` (including the empty set) and every ``j`` outside
    ``I`` with ``Pr[X_j = 1] > 0``.  The witness is ``(I, {j})``.
    """
    a = _absent_table(spec, max_n, exact, cap)
    n = spec.n
    full = (1 << n) - 1
    worst = None
    witness = None
    pairs = 0
    p_in = [1 - a[1 << j] for j in range(n)]
    floor = 0 if exact else tol
    for i_mask in range(full + 1):
        a_i = a[i_mask]
        for j in range(n):
            bit = 1 << j
            if i_mask & bit or p_in[j] <= floor:
                continue
            # Pr[I all absent, j present] / Pr[j present] = conditional miss probability
            cond_miss = (a_i - a[i_mask | bit]) / p_in[j]
            slack = a_i - cond_miss
            pairs += 1
            if worst is None or slack > worst:
                worst, witness = slack, (i_mask, bit)
    if worst is None:
        worst = Fraction(0) if exact else 0.0
    else:
        witness = (_mask_set(witness[0]), _mask_set(witness[1]))
    return _finish(worst, witness, pairs, exact, tol)
