"""
How many samples the guarantees ask for
=======================================

The general bound is modest; the bound behind the uniform ``k``-subset
variant explodes, which is why desk-scale runs check properties instead.
"""

from opss import (UniformAtMostK, UniformExactK, required_samples_for,
                  required_samples_general, required_samples_uniform_k)

print("general, n=20 m=10 c=1 delta=0.1:", required_samples_general(20, 10, 1, 0.1))
for spec in (UniformExactK(20, k=5), UniformAtMostK(20, k=5)):
    print(f"{spec.to_string():26s} exact bound:", required_samples_for(spec, 10, 0.1))

for eps in (0.9, 0.7, 0.5, 0.3):
    t = required_samples_uniform_k(40, 10, 10, eps, 0.1)
    print(f"uniform-k eps={eps}: about 10^{len(str(t)) - 1} samples")
