"""
Which sample distributions are negatively correlated
=====================================================

Exact enumeration over disjoint pairs ``(I, J)`` shows that uniform
``k``-subsets pass while block samples fail.
"""

from opss import (BlockPartition, UniformAtMostK, UniformExactK,
                  check_conditional_lemma, check_negative_correlation)

for spec in (UniformExactK(6, k=3), UniformAtMostK(6, k=2),
             BlockPartition(6, k=3), BlockPartition(4, k=2)):
    nc = check_negative_correlation(spec, exact=True)
    lemma = check_conditional_lemma(spec, exact=True)
    print(f"{spec.to_string():28s} holds={nc.holds_everywhere!s:5s} "
          f"worst={str(nc.worst_violation):6s} lemma holds={lemma.holds_everywhere}")

# the witness pinpoints why blocks fail: seeing one node of a block
# forces its partner in
print(check_negative_correlation(BlockPartition(4, k=2), exact=True).witness)
