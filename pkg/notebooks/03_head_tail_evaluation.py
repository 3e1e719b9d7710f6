"""
Evaluating separately on frequent and rare labels
=================================================

In a long-tailed label space a system can look strong overall while
failing on rare labels. Splitting labels into the most frequent fifth
(head) and the rest (tail) makes that visible.
"""

from rankfuse import MetricSpec, Qrels, Run, evaluate, make_ranked_list, ndcg_at_k, partition_labels

frequencies = {"sports": 900, "politics": 700, "curling": 3, "fencing": 2, "luge": 1,
               "biathlon": 1, "skeleton": 1, "bobsleigh": 1, "sumo": 1, "polo": 1}
part = partition_labels(frequencies)
print("head:", sorted(part.head))
print("tail:", sorted(part.tail))

# %%
# Two queries, each with one frequent and one rare gold label.
qrels = Qrels.from_sets({"d1": {"sports", "curling"}, "d2": {"politics", "luge"}})
run = Run("popular", {
    "d1": make_ranked_list("d1", [("sports", 3), ("politics", 2), ("curling", 1)]),
    "d2": make_ranked_list("d2", [("politics", 3), ("sports", 2), ("sumo", 1)]),
})

# %%
# The head view keeps only head labels in both the gold set and the
# ranking, so the rare labels ranked below are judged on their own.
for view in ("all", "head", "tail"):
    row = [f"{m}@{k}={evaluate(run, qrels, part, MetricSpec(m, k, view)):.3f}"
           for m in ("p", "ndcg") for k in (1, 3)]
    print(f"{view:>4}", *row)

# %%
# nDCG on a small case by hand: hits at ranks 1 and 3 out of two gold.
# DCG = 1 + 1/log2(4); IDCG = 1 + 1/log2(3).
print(ndcg_at_k(["a", "x", "b"], {"a", "b"}, 3))
