"""Monte Carlo experiments measuring approximation ratios of the OPSS algorithms.

Each trial realizes a hidden graph, draws a sample log, runs one algorithm
and divides the achieved coverage by the optimum of the hidden graph.

Random streams
--------------
Trial ``i`` of an experiment with master seed ``s`` uses
``numpy.random.SeedSequence([s, i]).spawn(3)``, in the order
(graph, samples, algorithm).  A trial therefore never depends on how many
other trials run, and runs that differ only in their algorithm see the same
graphs and the same sample logs.

Optimum
-------
The denominator comes from the first available source: the closed form of an
adversarial family, exhaustive search when ``C(n, k)`` is within the cap, or
greedy on the hidden graph.  Greedy counts as exact when it covers every
coverable right node; otherwise the result is flagged as a lower bound.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .adversarial import (
    FAMILIES,
    HardnessInstance,
    gen_assumption2_family,
    gen_assumption3_instance,
    gen_half_hardness,
    gen_infeasible_family,
)
from .algorithms import ALGORITHMS, generate_log, run_algorithm, surrogate_error_set
from .coverage import BipartiteGraph, coverage_value, random_graph, read_graph
from .distributions import DistributionSpec, draw_batch, min_inclusion_probability, parse_distribution
from .errors import CapacityError, OpssError, ValidationError
from .solvers import DEFAULT_EXHAUSTIVE_CAP, exhaustive_max_coverage, get_solver, greedy_max_coverage

CSV_VERSION = 1
CSV_COLUMNS = (
    "trial",
    "ratio",
    "t1_value",
    "t2_value",
    "surrogate_value_t2",
    "containment",
    "opt",
    "seed_stream",
    "realized_ratio",
    "coin",
)
SOURCES = ("random", "file") + FAMILIES
LOWER_BOUND_NOTE = "OPT is a lower bound; ratios are upper estimates"


def required_samples_general(n: int, m: int, c: float, delta: float) -> int:
    """``ceil((4 n^c m / delta) ln(4 n m / delta))`` samples for the general algorithm.

    The tail bound behind the formula needs ``m >= 2 delta``.
    """
    if not 0 < delta < 1:
        raise ValidationError(f"delta must lie in (0, 1), got {delta}")
    if n < 1 or m < 1 or c < 0:
        raise ValidationError(f"need n, m >= 1 and c >= 0, got n={n}, m={m}, c={c}")
    if m < 2 * delta:
        raise ValidationError(f"the sample bound needs m >= 2*delta, got m={m}, delta={delta}")
    return math.ceil(4 * n**c * m / delta * math.log(4 * n * m / delta))


def exponent_for(spec: DistributionSpec) -> float:
    """Smallest ``c`` with ``min_u Pr[u in S] >= 1 / n^c``."""
    p = min_inclusion_probability(spec)
    if p <= 0:
        raise ValidationError(f"{spec} never samples some node; no finite exponent exists")
    if spec.n == 1:
        return 0.0
    return max(0.0, math.log(1 / p) / math.log(spec.n))


def required_samples_for(spec: DistributionSpec, m: int, delta: float) -> int:
    """:func:`required_samples_general` with ``n^c`` replaced by the exact ``1 / min_u p_u``."""
    p = min_inclusion_probability(spec, exact=True)
    if p <= 0:
        raise ValidationError(f"{spec} never samples some node; no finite sample bound exists")
    if not 0 < delta < 1:
        raise ValidationError(f"delta must lie in (0, 1), got {delta}")
    if m < 2 * delta:
        raise ValidationError(f"the sample bound needs m >= 2*delta, got m={m}, delta={delta}")
    n = spec.n
    return math.ceil(4 * float(1 / p) * m / delta * math.log(4 * n * m / delta))


def required_samples_uniform_k(n: int, m: int, k: int, eps, delta: float) -> int:
    """``ceil((2n/k) (2m/eps)^(8/eps) ln(2nm/delta))`` as an exact Python int.

    The value is evaluated with mpmath at enough digits to make the ceiling
    exact; it is far beyond 64 bits for any interesting ``m`` and ``eps``.
    """
    e = Fraction(str(eps)) if isinstance(eps, float) else Fraction(eps)
    if not 0 < e < 1:
        raise ValidationError(f"eps must lie in (0, 1), got {eps}")
    if not 0 < delta < 1:
        raise ValidationError(f"delta must lie in (0, 1), got {delta}")
    if n < 1 or m < 1 or not 1 <= k <= n:
        raise ValidationError(f"need n, m >= 1 and 1 <= k <= n, got n={n}, m={m}, k={k}")
    magnitude = (8 / float(e)) * math.log10(2 * m / float(e)) + math.log10(2 * n / k) + 2
    with mpmath.workdps(max(50, int(magnitude) + 30)):
        eps_mp = mpmath.mpf(e.numerator) / e.denominator
        # decimal reading of delta, so 0.1 means 1/10 rather than its binary neighbor
        d = Fraction(str(delta))
        delta_mp = mpmath.mpf(d.numerator) / d.denominator
        value = (
            mpmath.mpf(2 * n) / k
            * mpmath.power(2 * m / eps_mp, 8 / eps_mp)
            * mpmath.log(2 * n * m / delta_mp)
        )
        return int(mpmath.ceil(value))


def hoeffding_half_width(trials: int, beta: float = 0.05) -> float:
    """Half-width ``sqrt(ln(2/beta) / (2T))`` of a two-sided Hoeffding interval for [0, 1] data."""
    if trials < 1 or not 0 < beta < 1:
        raise ValidationError("need trials >= 1 and beta in (0, 1)")
    return math.sqrt(math.log(2 / beta) / (2 * trials))


def estimate_coverage_probability(
    g: BipartiteGraph, spec: DistributionSpec, v: int, trials: int, rng: np.random.Generator
) -> float:
    """Monte Carlo frequency of ``v in N_G(S)`` for ``S`` drawn from ``spec``."""
    if not 0 <= v < g.n_right:
        raise ValidationError(f"right index {v} out of range [0, {g.n_right})")
    if spec.n != g.n_left or trials < 1:
        raise ValidationError("distribution size must match the graph and trials must be >= 1")
    members = draw_batch(spec, rng, trials)
    return float((members @ g.matrix[:, v]).mean()) if g.right_degrees[v] else 0.0


def trial_streams(seed: int, trial: int) -> tuple[np.random.Generator, ...]:
    children = np.random.SeedSequence([seed, trial]).spawn(3)
    return tuple(np.random.default_rng(c) for c in children)


_INT_KEYS = {"n", "m", "k", "r", "p", "trials", "seed", "exhaustive_cap"}
_FLOAT_KEYS = {"edge_prob", "eps", "delta", "c", "threshold", "beta"}


@dataclass
class ExperimentConfig:
    source: str = "random"
    graph: str | None = None
    dist: str | None = None
    n: int | None = None
    m: int | None = None
    k: int = 1
    r: int | None = None
    p: int | None = None
    edge_prob: float = 0.3
    hidden: int | None = None
    algo: str = "general"
    solver: str = "greedy"
    eps: float | None = None
    trials: int = 100
    samples: int | None = None
    seed: int = 0
    delta: float = 0.1
    c: float | None = None
    threshold: float | None = None
    beta: float = 0.05
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP
    csv: str | None = None
    json: str | None = None

    def validate(self) -> None:
        if self.source not in SOURCES:
            raise ValidationError(f"source must be one of {SOURCES}, got {self.source!r}")
        if self.algo not in ALGORITHMS:
            raise ValidationError(f"algo must be one of {ALGORITHMS}, got {self.algo!r}")
        get_solver(self.solver)
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if self.samples is not None and self.samples < 1:
            raise ValidationError("samples must be >= 1 (or 'auto')")
        if self.seed < 0:
            raise ValidationError("seed must be non-negative")
        if self.algo == "uniform-k" and self.eps is None:
            raise ValidationError("algo=uniform-k needs eps")
        if self.source in ("random", "file") and not self.dist:
            raise ValidationError(f"source={self.source} needs dist")
        if self.source == "file":
            if not self.graph or not os.path.exists(self.graph):
                raise ValidationError(f"graph file {self.graph!r} does not exist")
        needed = {
            "random": ("n", "m"),
            "half-hardness": ("n", "r"),
            "infeasible": ("n", "r", "p"),
            "assumption2": ("n", "m"),
            "assumption3": ("n", "r"),
            "file": (),
        }[self.source]
        missing = [key for key in needed if getattr(self, key) is None]
        if missing:
            raise ValidationError(f"source={self.source} needs {missing}")

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        """Parse flat ``key = value`` lines; ``#`` starts a comment."""
        kwargs: dict = {}
        names = {f.name for f in dataclasses.fields(cls)}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip().lower().replace("-", "_"), value.strip()
            if not sep or key not in names:
                raise ValidationError(f"config line {lineno}: unknown or malformed entry {raw.strip()!r}")
            kwargs[key] = _coerce(key, value, lineno)
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def _coerce(key: str, value: str, lineno: int):
    try:
        if key == "samples":
            return None if value.lower() == "auto" else int(value)
        if key == "hidden":
            return None if value.lower() == "random" else int(value)
        if key in _INT_KEYS:
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
    except ValueError:
        raise ValidationError(f"config line {lineno}: bad value {value!r} for {key}") from None
    return value


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    ratio: float
    t1_value: int
    t2_value: int
    surrogate_value_t2: int
    containment: bool
    opt: int
    seed_stream: str
    realized_ratio: float
    coin: str | None
    superset_ok: bool = True
    opt_source: str = "exhaustive"

    def csv_row(self) -> list[str]:
        return [
            str(self.trial),
            repr(self.ratio),
            str(self.t1_value),
            str(self.t2_value),
            str(self.surrogate_value_t2),
            "true" if self.containment else "false",
            str(self.opt),
            self.seed_stream,
            repr(self.realized_ratio),
            self.coin or "",
        ]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    threshold: float
    beta: float = 0.05
    opt_sources: tuple[str, ...] = field(default=())

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.records])

    @property
    def mean_ratio(self) -> float:
        return float(self.ratios.mean())

    @property
    def half_width(self) -> float:
        return hoeffding_half_width(len(self.records), self.beta)

    @property
    def success_fraction(self) -> float:
        return float(np.mean([r.ratio >= self.threshold - 1e-12 for r in self.records]))

    @property
    def realized_success_fraction(self) -> float:
        return float(np.mean([r.realized_ratio >= self.threshold - 1e-12 for r in self.records]))

    @property
    def containment_fraction(self) -> float:
        return float(np.mean([r.containment for r in self.records]))

    @property
    def opt_is_lower_bound(self) -> bool:
        return "greedy-lower-bound" in self.opt_sources

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in self.records:
            writer.writerow(rec.csv_row())
        return buf.getvalue()

    def summary(self) -> dict:
        out = {
            "csv_version": CSV_VERSION,
            "trials": len(self.records),
            "mean_ratio": self.mean_ratio,
            "half_width": self.half_width,
            "beta": self.beta,
            "threshold": self.threshold,
            "success_fraction_expected_value": self.success_fraction,
            "success_fraction_realized_value": self.realized_success_fraction,
            "containment_fraction": self.containment_fraction,
            "superset_ok": all(r.superset_ok for r in self.records),
            "opt_sources": list(self.opt_sources),
            "config": {k: v for k, v in dataclasses.asdict(self.config).items() if k not in ("csv", "json")},
        }
        if self.opt_is_lower_bound:
            out["note"] = LOWER_BOUND_NOTE
        return out

    def write(self, csv_path=None, json_path=None) -> None:
        csv_path = csv_path or self.config.csv
        json_path = json_path or self.config.json
        if csv_path:
            with open(csv_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(self.to_csv_text())
        if json_path:
            with open(json_path, "w", encoding="utf-8") as fh:
                json.dump(self.summary(), fh, indent=2, sort_keys=True)
                fh.write("\n")


def default_threshold(cfg: ExperimentConfig) -> float:
    alpha = 1.0 if cfg.solver == "exact" else 1 - 1 / math.e
    if cfg.algo == "uniform-k":
        return alpha - float(cfg.eps)
    if cfg.algo == "large-sample" and cfg.r:
        return alpha / 2 * min(1.0, cfg.k / cfg.r)
    return alpha / 2


def _realize(cfg: ExperimentConfig, rng: np.random.Generator, file_graph: BipartiteGraph | None):
    """Return ``(graph, distribution, closed-form optimum or None)`` for one trial."""
    src = cfg.source
    if src == "random":
        return random_graph(cfg.n, cfg.m, cfg.edge_prob, rng), parse_distribution(cfg.dist), None
    if src == "file":
        return file_graph, parse_distribution(cfg.dist), None
    inst: HardnessInstance
    if src == "half-hardness":
        hidden = cfg.hidden if cfg.hidden is not None else int(rng.integers(0, cfg.k - 1))
        inst = gen_half_hardness(cfg.n, cfg.k, cfg.r, hidden)
    elif src == "infeasible":
        hidden = cfg.hidden if cfg.hidden is not None else int(rng.integers(0, cfg.p))
        inst = gen_infeasible_family(cfg.n, cfg.k, cfg.r, cfg.p, hidden, cfg.m)
    elif src == "assumption2":
        hidden = cfg.hidden if cfg.hidden is not None else int(rng.integers(0, cfg.n // 2))
        inst = gen_assumption2_family(cfg.n, cfg.m, hidden, cfg.k)
    else:
        inst = gen_assumption3_instance(cfg.n, cfg.k, cfg.r, rng)
    return inst.graph, inst.dist, inst.opt_value


def optimum(g: BipartiteGraph, k: int, cap: int = DEFAULT_EXHAUSTIVE_CAP) -> tuple[int, str]:
    """Best available optimum value of ``g`` at budget ``k`` and where it came from."""
    k = min(k, g.n_left)
    if math.comb(g.n_left, k) <= cap:
        return exhaustive_max_coverage(g, k, cap).value, "exhaustive"
    value = greedy_max_coverage(g, k).value
    if value == coverage_value(g, range(g.n_left)):
        return value, "greedy-saturated"
    return value, "greedy-lower-bound"


def run_trial(cfg: ExperimentConfig, trial: int, file_graph: BipartiteGraph | None = None) -> TrialRecord:
    g_rng, s_rng, a_rng = trial_streams(cfg.seed, trial)
    g, spec, closed_opt = _realize(cfg, g_rng, file_graph)
    if cfg.samples is not None:
        t = cfg.samples
    elif cfg.c is not None:
        t = required_samples_general(g.n_left, g.n_right, cfg.c, cfg.delta)
    else:
        t = required_samples_for(spec, g.n_right, cfg.delta)
    log = generate_log(g, spec, t, s_rng, k=cfg.k, seed=cfg.seed)
    out = run_algorithm(cfg.algo, log, cfg.k, get_solver(cfg.solver), a_rng, eps=cfg.eps)

    if closed_opt is not None:
        opt, source = closed_opt, "closed-form"
    else:
        opt, source = optimum(g, cfg.k, cfg.exhaustive_cap)

    s1 = log.first()
    superset_ok = bool((out.surrogate.graph.matrix >= g.matrix).all())
    if not superset_ok:
        raise RuntimeError(f"trial {trial}: surrogate is not an edge-superset of the hidden graph")
    containment = surrogate_error_set(g, out.surrogate) <= s1.covered
    f_s1 = len(s1.covered)
    f1 = coverage_value(g, out.t1)
    f2 = coverage_value(g, out.t2)
    if containment and out.surrogate_value_of_t2 > f2 + f_s1:
        raise RuntimeError(f"trial {trial}: containment holds but surrogate value of T2 exceeds f(S1) + f(T2)")
    f_ret = coverage_value(g, out.returned)
    denom = opt if opt else 1
    realized = f_ret / denom if opt else 1.0
    if cfg.algo == "general":
        ratio = (f1 + f2) / 2 / denom if opt else 1.0
    else:
        ratio = realized
    return TrialRecord(
        trial=trial,
        ratio=ratio,
        t1_value=f1,
        t2_value=f2,
        surrogate_value_t2=out.surrogate_value_of_t2,
        containment=containment,
        opt=opt,
        seed_stream=f"{cfg.seed}.{trial}",
        realized_ratio=realized,
        coin=out.coin,
        superset_ok=superset_ok,
        opt_source=source,
    )


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run ``cfg.trials`` independent trials in order and aggregate them."""
    cfg.validate()
    file_graph = read_graph(cfg.graph) if cfg.source == "file" else None
    records = []
    for i in range(cfg.trials):
        try:
            records.append(run_trial(cfg, i, file_graph))
        except CapacityError as exc:
            raise CapacityError(f"trial {i}: {exc}", exc.cap) from exc
        except OpssError as exc:
            raise type(exc)(f"trial {i}: {exc}") from exc
    threshold = cfg.threshold if cfg.threshold is not None else default_threshold(cfg)
    sources = tuple(sorted({r.opt_source for r in records}))
    return ExperimentResult(cfg, records, threshold, cfg.beta, sources)


__all__ = [
    "CSV_COLUMNS",
    "ExperimentConfig",
    "ExperimentResult",
    "TrialRecord",
    "default_threshold",
    "estimate_coverage_probability",
    "exponent_for",
    "hoeffding_half_width",
    "optimum",
    "required_samples_for",
    "required_samples_general",
    "required_samples_uniform_k",
    "run_experiment",
    "run_trial",
    "trial_streams",
]
