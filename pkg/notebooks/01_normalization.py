"""
Putting two retrievers on one scale
===================================

A lexical scorer emits BM25-like values in the tens while a dense scorer
emits cosine similarities in [-1, 1]. Before their scores can be added
they need a common scale. This script shows what each normalizer does to
the same pair of lists.
"""

import numpy as np

from rankfuse import make_ranked_list, normalize
from rankfuse.core import NormStrategy

sparse = make_ranked_list("q1", [("L7", 14.2), ("L3", 11.9), ("L9", 6.1), ("L1", 5.8)])
dense = make_ranked_list("q1", [("L3", 0.81), ("L5", 0.77), ("L7", 0.42), ("L2", -0.10)])

# %%
# Raw scores are not comparable: the worst sparse hit outscores the best
# dense one by a wide margin.
print("raw sparse:", sparse.scores)
print("raw dense: ", dense.scores)

# %%
# Every strategy keeps the order of each list and only changes the values.
for strategy in NormStrategy:
    if strategy is NormStrategy.NONE:
        continue
    s = normalize(sparse, strategy)
    d = normalize(dense, strategy)
    print(f"{strategy.value:>8}  sparse {np.round(s.scores, 3)}  dense {np.round(d.scores, 3)}")

# %%
# Degenerate inputs get fixed outputs rather than a division by zero.
flat = make_ranked_list("q2", [("a", 3.0), ("b", 3.0), ("c", 3.0)])
for strategy in ("min-max", "sum", "zmuv"):
    print(strategy, normalize(flat, strategy).scores)

# %%
# Rank and Borda ignore the values entirely, so any strictly increasing
# rescaling of the input gives the same output.
squashed = make_ranked_list("q1", [(label, np.tanh(score / 10)) for label, score in sparse.entries])
assert normalize(squashed, "rank") == normalize(sparse, "rank")
assert normalize(squashed, "borda") == normalize(sparse, "borda")
print("rank/borda unchanged by tanh rescaling")
