"""Optimization from structured samples (OPSS) for coverage functions.

Given samples ``(S_i, N_G(S_i))`` of a hidden bipartite graph ``G``, the
package rebuilds a surrogate graph and picks a budget-``k`` set of left nodes
with provably good coverage in ``G``.  It also ships the hard instance
families that show when this is impossible, and a seeded Monte Carlo harness
that measures approximation ratios.

Quick start::

    import numpy as np
    from opss import (UniformExactK, random_graph, generate_log,
                      algorithm_general, coverage_value)

    rng = np.random.default_rng(0)
    g = random_graph(20, 10, 0.2, rng)
    log = generate_log(g, UniformExactK(20, k=4), t=2000, rng=rng)
    out = algorithm_general(log, k=4, rng=rng)
    coverage_value(g, out.returned)
"""

from .adversarial import (
    HardnessInstance,
    gen_assumption2_family,
    gen_assumption3_instance,
    gen_half_hardness,
    gen_infeasible_family,
)
from .algorithms import (
    OpssOutcome,
    Sample,
    SampleLog,
    Surrogate,
    algorithm_general,
    algorithm_large_sample,
    algorithm_uniform_k,
    build_surrogate,
    generate_log,
    read_log,
    run_algorithm,
    surrogate_error_set,
    write_log,
)
from .coverage import (
    BipartiteGraph,
    coverage_probability_exact,
    coverage_value,
    degree_right,
    marginal_gain,
    neighbors,
    random_graph,
    read_graph,
    write_graph,
)
from .distributions import (
    BlockPartition,
    CorrelationReport,
    DistributionSpec,
    FiniteDistribution,
    HalfHardness,
    SubsetOfL2ExactK,
    UniformAtMostK,
    UniformExactK,
    UniformExactR,
    check_conditional_lemma,
    check_negative_correlation,
    draw,
    draw_batch,
    enumerate_support,
    inclusion_probability,
    parse_distribution,
)
from .errors import AssumptionWarning, CapacityError, OpssError, ValidationError
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    estimate_coverage_probability,
    required_samples_for,
    required_samples_general,
    required_samples_uniform_k,
    run_experiment,
)
from .solvers import (
    SOLVERS,
    SolverResult,
    exhaustive_max_coverage,
    greedy_max_coverage,
    get_solver,
    lazy_greedy_max_coverage,
)

__version__ = "0.1.0"
