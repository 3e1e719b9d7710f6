"""Synthetic long-tail benchmarks and brute-force reference implementations.

The generators draw from numpy's Philox generator, a counter-based 64-bit
bit generator, so a given ``seed`` yields the same data on every platform.

The ``oracle_*`` functions are deliberately naive re-implementations used
by the test-suite to check :mod:`rankfuse.fuse` and
:mod:`rankfuse.evaluation` and share no code with them.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Qrels, RankedList, Run, make_ranked_list
from .io import write_label_frequencies, write_qrels, write_run_file
from .pipeline import Fold

__all__ = [
    "SynthSpec",
    "gen_label_space",
    "gen_qrels",
    "gen_run_pair",
    "gen_benchmark",
    "write_benchmark",
    "oracle_condorcet",
    "oracle_metrics",
]


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a synthetic benchmark.

    ``noise`` in [0, 1] mixes uniform noise into the run scores: 0 ranks
    gold labels purely by signal, 1 makes scores independent of gold.
    ``n_candidates`` is the number of non-gold distractors per run list and
    ``other_recall`` the chance that a run retrieves a gold label outside
    the partition it is good at.
    """

    n_labels: int = 1000
    n_queries: int = 200
    zipf_exponent: float = 1.0
    gold_per_query: int = 5
    noise: float = 0.3
    seed: int = 0
    n_candidates: int = 64
    other_recall: float = 0.5

    def __post_init__(self):
        for name in ("n_labels", "n_queries", "gold_per_query", "n_candidates"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.zipf_exponent <= 0:
            raise ValueError("zipf_exponent must be > 0")
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError("noise must lie in [0, 1]")
        if not 0.0 <= self.other_recall <= 1.0:
            raise ValueError("other_recall must lie in [0, 1]")
        if self.gold_per_query > self.n_labels:
            raise ValueError("gold_per_query cannot exceed n_labels")

    def rng(self, stream: int) -> np.random.Generator:
        # independent Philox streams per purpose, all keyed by the seed
        return np.random.Generator(np.random.Philox(key=[self.seed & 0xFFFFFFFFFFFFFFFF, stream]))


def _label_ids(n: int) -> list[str]:
    width = len(str(n - 1))
    return [f"L{i:0{width}d}" for i in range(n)]


def _query_ids(n: int) -> list[str]:
    width = len(str(n - 1))
    return [f"q{i:0{width}d}" for i in range(n)]


def _zipf_weights(spec: SynthSpec) -> tuple[list[str], np.ndarray]:
    """Label ids in popularity order and their normalized Zipf weights."""
    ids = _label_ids(spec.n_labels)
    order = spec.rng(0).permutation(spec.n_labels)
    ranked_ids = [ids[i] for i in order]
    w = np.arange(1, spec.n_labels + 1, dtype=float) ** -spec.zipf_exponent
    return ranked_ids, w / w.sum()


def gen_label_space(spec: SynthSpec, scale: float | None = None) -> dict[str, int]:
    """Zipf label frequencies: the label of popularity rank ``r`` gets ``round(scale / r**s)``.

    ``scale`` is the top label's count; by default it is chosen so that the
    total roughly matches ``n_queries * gold_per_query`` assignments. Which
    label id receives which rank is a seeded permutation.
    """
    ranked_ids, weights = _zipf_weights(spec)
    if scale is None:
        scale = spec.n_queries * spec.gold_per_query * weights[0]
    raw = scale * np.arange(1, spec.n_labels + 1, dtype=float) ** -spec.zipf_exponent
    counts = np.rint(raw).astype(np.int64)
    return {label: int(c) for label, c in zip(ranked_ids, counts)}


def gen_qrels(spec: SynthSpec) -> Qrels:
    """Each query draws ``gold_per_query`` distinct labels with Zipf popularity."""
    ranked_ids, weights = _zipf_weights(spec)
    rng = spec.rng(1)
    judgments = {}
    for qid in _query_ids(spec.n_queries):
        picks = rng.choice(spec.n_labels, size=spec.gold_per_query, replace=False, p=weights)
        judgments[qid] = {ranked_ids[i] for i in picks}
    return Qrels.from_sets(judgments)


def _head_labels(spec: SynthSpec) -> frozenset:
    ranked_ids, _ = _zipf_weights(spec)
    return frozenset(ranked_ids[: -(-spec.n_labels // 5)])


# signal for gold labels the run is good at / other gold / distractors
_FAVORED, _OTHER, _DISTRACTOR = 1.0, 0.3, 0.0


def gen_run_pair(spec: SynthSpec, qrels: Qrels, head: frozenset | None = None) -> tuple[Run, Run]:
    """Two complementary runs over ``qrels``.

    The ``sparse`` run is strong on tail gold labels and the ``dense`` run
    on head gold labels. Each list holds the gold labels of its favored
    partition, each other gold label with probability ``other_recall``, and
    ``n_candidates`` popularity-sampled distractors. A label's score is
    ``(1 - noise) * signal + noise * u`` with ``u ~ U(0, 1)``, then mapped
    affinely to a BM25-like range (sparse) or a cosine-like range (dense).
    ``head`` defaults to the generator's own top 20% of labels.
    """
    ranked_ids, weights = _zipf_weights(spec)
    head = _head_labels(spec) if head is None else head
    rng = spec.rng(2)
    runs = {"sparse": {}, "dense": {}}
    affine = {"sparse": (12.0, 0.5), "dense": (2.0, -1.0)}
    for qid in sorted(qrels.judgments):
        gold = qrels.judgments[qid]
        for tag in ("sparse", "dense"):
            favored = (lambda lab: lab not in head) if tag == "sparse" else (lambda lab: lab in head)
            n_pool = min(spec.n_labels, spec.n_candidates + len(gold))
            picks = rng.choice(spec.n_labels, size=n_pool, replace=False, p=weights)
            distractors = [ranked_ids[i] for i in picks if ranked_ids[i] not in gold]
            kept = [lab for lab, keep in zip(sorted(gold), rng.random(len(gold)))
                    if favored(lab) or keep < spec.other_recall]
            candidates = kept + distractors[: spec.n_candidates]
            u = rng.random(len(candidates))
            a, b = affine[tag]
            pairs = []
            for label, noise_u in zip(candidates, u):
                if label in gold:
                    signal = _FAVORED if favored(label) else _OTHER
                else:
                    signal = _DISTRACTOR
                raw = (1.0 - spec.noise) * signal + spec.noise * noise_u
                pairs.append((label, a * raw + b))
            runs[tag][qid] = make_ranked_list(qid, pairs)
    return Run("sparse", runs["sparse"]), Run("dense", runs["dense"])


def gen_benchmark(spec: SynthSpec, n_folds: int = 5) -> list[Fold]:
    """Cross-validation folds over one synthetic dataset.

    Queries are dealt into ``n_folds`` test folds at random. Each fold's
    label frequencies count gold assignments in the *other* folds, with
    every label of the space present (possibly with count 0).
    """
    if n_folds < 2:
        raise ValueError("need at least 2 folds")
    qrels = gen_qrels(spec)
    sparse, dense = gen_run_pair(spec, qrels)
    qids = qrels.query_ids()
    order = spec.rng(3).permutation(len(qids))
    fold_of = {qids[j]: pos % n_folds for pos, j in enumerate(order)}
    all_labels = _label_ids(spec.n_labels)

    folds = []
    for f in range(n_folds):
        test = [q for q in qids if fold_of[q] == f]
        counts = dict.fromkeys(all_labels, 0)
        for q in qids:
            if fold_of[q] != f:
                for label in qrels.judgments[q]:
                    counts[label] += 1
        fold_qrels = Qrels({q: qrels.grades[q] for q in test})
        fold_runs = tuple(Run(run.system_tag, {q: run[q] for q in test}) for run in (sparse, dense))
        folds.append(Fold(fold_qrels, fold_runs, counts))
    return folds


def write_benchmark(folds: Sequence[Fold], directory) -> list[str]:
    """Write ``fold_<i>/{<tag>.run, qrels.txt, freqs.tsv}`` and return the fold paths."""
    paths = []
    for i, fold in enumerate(folds):
        path = os.path.join(os.fspath(directory), f"fold_{i}")
        os.makedirs(path, exist_ok=True)
        for run in fold.runs:
            write_run_file(run, os.path.join(path, f"{run.system_tag}.run"))
        write_qrels(fold.qrels, os.path.join(path, "qrels.txt"))
        write_label_frequencies(fold.frequencies, os.path.join(path, "freqs.tsv"))
        paths.append(path)
    return paths


# -- oracles -----------------------------------------------------------------

def oracle_condorcet(lists: Sequence[RankedList]) -> list[str]:
    """Copeland ordering by exhaustive pairwise majority, written as plainly as possible."""
    orders = [[label for label, _ in rl.entries] for rl in lists]
    labels = []
    for order in orders:
        for label in order:
            if label not in labels:
                labels.append(label)
    points = {label: 0.0 for label in labels}
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            d, e = labels[i], labels[j]
            for_d = for_e = 0
            for order in orders:
                if d in order and e in order:
                    if order.index(d) < order.index(e):
                        for_d += 1
                    else:
                        for_e += 1
                elif d in order:
                    for_d += 1
                elif e in order:
                    for_e += 1
            if for_d > for_e:
                points[d] += 1.0
            elif for_e > for_d:
                points[e] += 1.0
            else:
                points[d] += 0.5
                points[e] += 0.5
    return sorted(labels, key=lambda label: (-points[label], label))


def oracle_metrics(ranking: Sequence[str] | RankedList, gold, k: int) -> tuple[float, float | None]:
    """Precision@k and nDCG@k by literal recount; nDCG is ``None`` for empty gold."""
    if isinstance(ranking, RankedList):
        ranking = [label for label, _ in ranking.entries]
    gold = set(gold)
    hits = 0
    dcg = 0.0
    for i in range(k):
        if i < len(ranking) and ranking[i] in gold:
            hits += 1
            dcg += 1.0 / math.log2(i + 2)
    precision = hits / k
    if not gold:
        return precision, None
    idcg = 0.0
    for i in range(min(k, len(gold))):
        idcg += 1.0 / math.log2(i + 2)
    return precision, dcg / idcg
