import numpy as np
import pytest

from rankfuse.core import make_ranked_list
from rankfuse.evaluation import partition_labels
from rankfuse.synth import (
    SynthSpec,
    gen_benchmark,
    gen_label_space,
    gen_qrels,
    gen_run_pair,
    oracle_condorcet,
    oracle_metrics,
)


def test_label_space_is_zipf():
    spec = SynthSpec(n_labels=4, zipf_exponent=1.0, gold_per_query=1, seed=3)
    counts = sorted(gen_label_space(spec, scale=12).values(), reverse=True)
    assert counts == [12, 6, 4, 3]


def test_label_space_deterministic():
    spec = SynthSpec(n_labels=50, seed=9)
    assert gen_label_space(spec) == gen_label_space(spec)
    assert gen_label_space(spec) != gen_label_space(SynthSpec(n_labels=50, seed=10))


def _head_share(counts):
    part = partition_labels(counts)
    total = sum(counts.values())
    return sum(counts[x] for x in part.head) / total


def test_head_share_grows_with_exponent():
    for seed in range(20):
        shares = [_head_share(gen_label_space(SynthSpec(n_labels=200, zipf_exponent=s, seed=seed), scale=1000))
                  for s in (0.5, 1.0, 1.5)]
        assert shares[0] < shares[1] < shares[2]


def test_qrels_shape():
    spec = SynthSpec(n_labels=100, n_queries=30, gold_per_query=4, seed=1)
    qrels = gen_qrels(spec)
    assert len(qrels) == 30
    assert all(len(g) == 4 for g in qrels.judgments.values())
    assert gen_qrels(spec) == qrels


def test_noise_free_runs_put_favored_gold_first():
    spec = SynthSpec(n_labels=300, n_queries=40, noise=0.0, seed=4)
    qrels = gen_qrels(spec)
    head = partition_labels(gen_label_space(spec)).head
    sparse, dense = gen_run_pair(spec, qrels, head=head)
    for qid, gold in qrels.judgments.items():
        for run, favored in ((sparse, gold - head), (dense, gold & head)):
            top = set(run[qid].labels[: len(favored)])
            assert top == favored


def test_noise_one_scores_ignore_gold():
    spec = SynthSpec(n_labels=500, n_queries=1000, noise=1.0, seed=5, n_candidates=20)
    qrels = gen_qrels(spec)
    sparse, _ = gen_run_pair(spec, qrels)
    scores, is_gold = [], []
    for qid, gold in qrels.judgments.items():
        for label, s in sparse[qid].entries:
            scores.append(s)
            is_gold.append(label in gold)
    corr = np.corrcoef(scores, is_gold)[0, 1]
    assert abs(corr) < 0.03


def test_run_pair_deterministic():
    spec = SynthSpec(n_labels=100, n_queries=20, seed=6)
    qrels = gen_qrels(spec)
    assert gen_run_pair(spec, qrels) == gen_run_pair(spec, qrels)


def test_benchmark_folds_partition_queries():
    spec = SynthSpec(n_labels=100, n_queries=53, seed=7)
    folds = gen_benchmark(spec, 5)
    qids = [q for f in folds for q in f.qrels.query_ids()]
    assert sorted(qids) == sorted(set(qids)) and len(qids) == 53
    whole = gen_qrels(spec)
    for f in folds:
        # training counts exclude the fold's own queries
        expected = {}
        for q in whole.query_ids():
            if q not in f.qrels.grades:
                for label in whole[q]:
                    expected[label] = expected.get(label, 0) + 1
        assert {k: v for k, v in f.frequencies.items() if v} == expected
        assert len(f.frequencies) == 100


def test_spec_validation():
    with pytest.raises(ValueError):
        SynthSpec(n_labels=0)
    with pytest.raises(ValueError):
        SynthSpec(noise=1.5)
    with pytest.raises(ValueError):
        SynthSpec(zipf_exponent=0)


def test_oracle_condorcet_examples():
    r1 = make_ranked_list("q", [("A", 1.0), ("B", 0.5)])
    r2 = make_ranked_list("q", [("B", 1.0), ("C", 0.4)])
    assert oracle_condorcet([r1, r2]) == ["B", "A", "C"]
    x = make_ranked_list("q", [("z", 3), ("a", 2), ("m", 1)])
    assert oracle_condorcet([x]) == ["z", "a", "m"]
    assert oracle_condorcet([x, x, x]) == ["z", "a", "m"]


def test_oracle_metrics_examples():
    p, n = oracle_metrics(["a", "x", "b"], {"a", "b"}, 3)
    assert p == pytest.approx(2 / 3) and n == pytest.approx(0.9197207891481876)
    assert oracle_metrics(["a", "b"], {"a", "b"}, 2) == (1.0, 1.0)
    assert oracle_metrics([], {"a"}, 3) == (0.0, 0.0)
    assert oracle_metrics(["a"], set(), 1) == (0.0, None)
