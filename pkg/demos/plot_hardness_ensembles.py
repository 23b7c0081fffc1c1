"""
Hard instance families
======================

Each family pairs a graph ensemble with a sample distribution under which
no algorithm can do well.  Mean ratios match the closed-form limits.
"""

import warnings

from opss import AssumptionWarning, ExperimentConfig, run_experiment

warnings.simplefilter("ignore", AssumptionWarning)

runs = {
    "half-hardness (limit 0.55)":
        dict(source="half-hardness", n=50, k=11, r=5, samples=500),
    "block samples (limit 1/6)":
        dict(source="assumption3", n=60, k=6, r=4, samples=300),
    "unsampled hidden node (limit 0.3)":
        dict(source="assumption2", n=20, m=5, k=3, samples=300),
    "oversized samples (limit 0.25)":
        dict(source="infeasible", n=64, k=2, r=32, p=8, algo="large-sample", samples=300),
}
for label, kw in runs.items():
    res = run_experiment(ExperimentConfig(trials=200, seed=7, **kw))
    print(f"{label:36s} mean ratio {res.mean_ratio:.3f} +- {res.half_width:.3f}")
