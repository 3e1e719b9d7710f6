"""Rank fusion over several ranked lists for the same query.

Score-based methods (CombMIN/MAX/MED/SUM/ANZ/MNZ) aggregate the scores a
label receives in the lists that contain it; a list that does not contain a
label contributes nothing to it, not an implicit zero. Rank-based methods
(ISR, LogISR) and voting methods (BordaFuse, Condorcet) read only canonical
rank positions, so they are invariant to any strictly increasing rescaling
of the input scores.

Sums go through :func:`math.fsum`, so the fused output does not depend on
the order of the input lists. Fused ties are broken by label ascending.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

import numpy as np

from .core import (
    DEFAULT_DEPTH,
    FusedList,
    FusionConfig,
    FusionMethod,
    RankedList,
    Run,
    canonical_key,
)
from .exceptions import NoLists
from .normalize import normalize

__all__ = [
    "FusionMethod",
    "comb_min",
    "comb_max",
    "comb_med",
    "comb_sum",
    "comb_anz",
    "comb_mnz",
    "isr",
    "log_isr",
    "borda_fuse",
    "condorcet",
    "fuse",
    "fuse_runs",
    "FUSERS",
]


class _Pool:
    """Per-label evidence gathered from the input lists."""

    def __init__(self, lists: Sequence[RankedList]):
        if not lists:
            raise NoLists("fusion needs at least one ranked list")
        qids = {rl.query_id for rl in lists}
        if len(qids) > 1:
            raise ValueError(f"lists belong to different queries: {sorted(qids)}")
        self.query_id = lists[0].query_id
        self.lists = lists
        self.scores: dict[str, list[float]] = {}
        self.ranks: dict[str, list[int]] = {}
        for rl in lists:
            for rank, (label, score) in enumerate(rl.entries, 1):
                self.scores.setdefault(label, []).append(score)
                self.ranks.setdefault(label, []).append(rank)

    def presence(self, label: str) -> int:
        return len(self.scores[label])

    def finish(self, fused: dict[str, float], depth: int) -> FusedList:
        if depth < 1:
            raise ValueError("depth must be >= 1")
        entries = sorted(fused.items(), key=canonical_key)[:depth]
        return FusedList(
            self.query_id,
            tuple(entries),
            presence={label: self.presence(label) for label, _ in entries},
        )


def _score_based(agg: Callable[[list[float]], float]):
    def method(lists: Sequence[RankedList], depth: int = DEFAULT_DEPTH) -> FusedList:
        pool = _Pool(lists)
        return pool.finish({label: agg(vals) for label, vals in pool.scores.items()}, depth)
    return method


def _median(values: list[float]) -> float:
    vals = sorted(values)
    mid = len(vals) // 2
    if len(vals) % 2:
        return vals[mid]
    return (vals[mid - 1] + vals[mid]) / 2


comb_min = _score_based(min)
comb_min.__name__ = "comb_min"
comb_min.__doc__ = "Minimum score over the lists containing each label."

comb_max = _score_based(max)
comb_max.__name__ = "comb_max"
comb_max.__doc__ = "Maximum score over the lists containing each label."

comb_med = _score_based(_median)
comb_med.__name__ = "comb_med"
comb_med.__doc__ = "Median score over the lists containing each label (mean of the middle two when even)."

comb_sum = _score_based(math.fsum)
comb_sum.__name__ = "comb_sum"
comb_sum.__doc__ = "Sum of scores over the lists containing each label."

comb_anz = _score_based(lambda v: math.fsum(v) / len(v))
comb_anz.__name__ = "comb_anz"
comb_anz.__doc__ = "CombSUM divided by the number of lists containing the label."

comb_mnz = _score_based(lambda v: math.fsum(v) * len(v))
comb_mnz.__name__ = "comb_mnz"
comb_mnz.__doc__ = "CombSUM multiplied by the number of lists containing the label."


def _inverse_square_rank(ranks: list[int]) -> float:
    return math.fsum(1.0 / (r * r) for r in ranks)


def isr(lists: Sequence[RankedList], depth: int = DEFAULT_DEPTH) -> FusedList:
    """Inverse square rank: ``|R(d)| * sum_r 1 / rank_r(d)**2``."""
    pool = _Pool(lists)
    fused = {label: len(ranks) * _inverse_square_rank(ranks) for label, ranks in pool.ranks.items()}
    return pool.finish(fused, depth)


def log_isr(lists: Sequence[RankedList], depth: int = DEFAULT_DEPTH) -> FusedList:
    """Like :func:`isr` but the frequency weight is ``ln(1 + |R(d)|)``.

    The ``1 +`` keeps labels retrieved by a single system from scoring zero.
    """
    pool = _Pool(lists)
    fused = {label: math.log1p(len(ranks)) * _inverse_square_rank(ranks)
             for label, ranks in pool.ranks.items()}
    return pool.finish(fused, depth)


def borda_fuse(lists: Sequence[RankedList], depth: int = DEFAULT_DEPTH) -> FusedList:
    """Each list awards ``N_r - rank`` points; absent labels get nothing from that list."""
    pool = _Pool(lists)
    fused = dict.fromkeys(pool.ranks, 0)
    for rl in lists:
        n = len(rl)
        for rank, (label, _) in enumerate(rl.entries, 1):
            fused[label] += n - rank
    return pool.finish({label: float(pts) for label, pts in fused.items()}, depth)


def condorcet(lists: Sequence[RankedList], depth: int = DEFAULT_DEPTH) -> FusedList:
    """Copeland scoring of pairwise majority contests.

    In every pair each list votes for the label it ranks higher; a label it
    contains beats one it lacks, and a list lacking both abstains. The
    majority winner of a pair earns 1 point, a tied pair 0.5 each.
    """
    pool = _Pool(lists)
    labels = sorted(pool.ranks)
    n = len(labels)
    if n == 0:
        return pool.finish({}, depth)
    index = {label: i for i, label in enumerate(labels)}
    ranks = np.full((len(lists), n), np.inf)
    for r, rl in enumerate(lists):
        for rank, (label, _) in enumerate(rl.entries, 1):
            ranks[r, index[label]] = rank
    votes = np.zeros((n, n), dtype=np.int64)
    for row in ranks:
        votes += row[:, None] < row[None, :]
    wins = (votes > votes.T).sum(axis=1)
    ties = (votes == votes.T).sum(axis=1) - 1  # drop the diagonal
    points = wins + 0.5 * ties
    return pool.finish({label: float(points[i]) for i, label in enumerate(labels)}, depth)


FUSERS: dict[FusionMethod, Callable[..., FusedList]] = {
    FusionMethod.COMB_MIN: comb_min,
    FusionMethod.COMB_MAX: comb_max,
    FusionMethod.COMB_MED: comb_med,
    FusionMethod.COMB_SUM: comb_sum,
    FusionMethod.COMB_ANZ: comb_anz,
    FusionMethod.COMB_MNZ: comb_mnz,
    FusionMethod.ISR: isr,
    FusionMethod.LOG_ISR: log_isr,
    FusionMethod.BORDA_FUSE: borda_fuse,
    FusionMethod.CONDORCET: condorcet,
}


def fuse(lists: Sequence[RankedList], config: FusionConfig) -> FusedList:
    """Normalize every list per ``config``, then fuse with ``config.method``.

    Empty lists are dropped before normalization: they carry no evidence and
    no normalizer is defined on them. If every list is empty the result is
    an empty :class:`FusedList`.
    """
    if not lists:
        raise NoLists("fusion needs at least one ranked list")
    normed = [normalize(rl, config.normalization) for rl in lists if rl.entries]
    if not normed:
        return FusedList(lists[0].query_id, ())
    return FUSERS[config.method](normed, config.depth)


def default_threads() -> int:
    env = os.environ.get("RANKFUSE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def fuse_runs(runs: Sequence[Run], config: FusionConfig, threads: int | None = None,
              system_tag: str | None = None) -> Run:
    """Fuse whole runs query by query.

    A query missing from some runs is fused over the runs that have it.
    Queries are processed independently (optionally on ``threads`` workers)
    and collected in query-id order, so the result never depends on
    scheduling.
    """
    if not runs:
        raise NoLists("fusion needs at least one run")
    qids = sorted(set().union(*(run.lists.keys() for run in runs)))

    def one(qid: str) -> FusedList:
        return fuse([run[qid] for run in runs if qid in run], config)

    threads = threads or 1
    if threads > 1 and len(qids) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            fused = list(ex.map(one, qids))
    else:
        fused = [one(q) for q in qids]
    tag = system_tag or f"{config.normalization.value}+{config.method.value}"
    return Run(tag, dict(zip(qids, fused)))
