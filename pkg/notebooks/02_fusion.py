"""
Ten ways to merge two rankings
==============================

Score-based methods combine normalized scores, rank-based ones use
positions only and voting methods treat each list as a ballot. Here all
ten run on the same toy pair so their disagreements are easy to see.
"""

from rankfuse import FusionConfig, fuse, make_ranked_list
from rankfuse.core import FusionMethod

sparse = make_ranked_list("q1", [("A", 9.0), ("B", 7.0), ("C", 2.0)])
dense = make_ranked_list("q1", [("B", 0.9), ("D", 0.8), ("A", 0.1)])

# %%
# With ZMUV scores, each method produces its own fused order. Labels that
# only one list retrieved contribute nothing from the other list.
for method in FusionMethod:
    fused = fuse([sparse, dense], FusionConfig("zmuv", method))
    cells = "  ".join(f"{label}:{score:.3f}" for label, score in fused.entries)
    print(f"{method.value:>10}  {cells}")

# %%
# CombMNZ rewards agreement: the sum is multiplied by how many lists
# contain the label.
mnz = fuse([sparse, dense], FusionConfig("zmuv", "combmnz"))
print({label: mnz.presence[label] for label in mnz.labels})

# %%
# With two lists the median of two scores is their mean, so CombMED and
# CombANZ coincide exactly.
med = fuse([sparse, dense], FusionConfig("min-max", "combmed"))
anz = fuse([sparse, dense], FusionConfig("min-max", "combanz"))
assert med.entries == anz.entries

# %%
# Rank and voting methods never look at score values, so the choice of
# normalization makes no difference to them.
for method in ("isr", "logisr", "bordafuse", "condorcet"):
    orders = {fuse([sparse, dense], FusionConfig(norm, method)).labels
              for norm in ("none", "min-max", "zmuv", "sum", "rank")}
    print(method, orders)
