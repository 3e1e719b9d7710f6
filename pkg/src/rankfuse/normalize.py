"""Score normalization strategies.

Each normalizer maps a :class:`~rankfuse.core.RankedList` to a new one over
the same labels in the same order, with rescaled scores. Degenerate inputs
(all scores equal) have fixed outputs so nothing ever divides by zero:

==========  =========================================
min-max     every score becomes 1.0
sum         uniform 1/N
zmuv        every score becomes 0.0
max         unchanged when the maximum is 0
==========  =========================================

Rank and Borda ignore score values and use canonical positions only.
"""

from __future__ import annotations

import math
from typing import Callable

from .core import NormStrategy, RankedList
from .exceptions import EmptyList

__all__ = [
    "NormStrategy",
    "norm_min_max",
    "norm_max",
    "norm_sum",
    "norm_zmuv",
    "norm_rank",
    "norm_borda",
    "norm_none",
    "normalize",
    "NORMALIZERS",
]


def _require_entries(rl: RankedList) -> tuple[float, ...]:
    if not rl.entries:
        raise EmptyList(f"cannot normalize empty list for query {rl.query_id!r}")
    return rl.scores


def norm_min_max(rl: RankedList) -> RankedList:
    """Rescale to [0, 1] via ``(s - min) / (max - min)``."""
    scores = _require_entries(rl)
    # entries are sorted, so the extremes sit at the ends
    hi, lo = scores[0], scores[-1]
    if hi == lo:
        return rl.with_scores([1.0] * len(scores))
    span = hi - lo
    return rl.with_scores([(s - lo) / span for s in scores])


def norm_max(rl: RankedList) -> RankedList:
    scores = _require_entries(rl)
    hi = scores[0]
    if hi == 0:
        return rl.with_scores(scores)
    # dividing by a negative maximum would invert the order; use |max|
    scale = abs(hi)
    return rl.with_scores([s / scale for s in scores])


def norm_sum(rl: RankedList) -> RankedList:
    """Shift so the minimum is 0, then divide by the shifted total."""
    scores = _require_entries(rl)
    lo = scores[-1]
    shifted = [s - lo for s in scores]
    total = math.fsum(shifted)
    if total == 0:
        n = len(scores)
        return rl.with_scores([1.0 / n] * n)
    return rl.with_scores([t / total for t in shifted])


def norm_zmuv(rl: RankedList) -> RankedList:
    """Zero mean, unit variance using the population standard deviation."""
    scores = _require_entries(rl)
    if scores[0] == scores[-1]:
        return rl.with_scores([0.0] * len(scores))
    n = len(scores)
    mean = math.fsum(scores) / n
    devs = [s - mean for s in scores]
    # scale before squaring so tiny spreads do not underflow to sigma == 0
    peak = max(abs(d) for d in devs)
    if peak == 0:
        return rl.with_scores([0.0] * n)
    sigma = peak * math.sqrt(math.fsum((d / peak) ** 2 for d in devs) / n)
    return rl.with_scores([d / sigma for d in devs])


def norm_rank(rl: RankedList) -> RankedList:
    """Position ``i`` of ``N`` scores ``(N - i + 1) / N``."""
    _require_entries(rl)
    n = len(rl)
    return rl.with_scores([(n - i) / n for i in range(n)])


def norm_borda(rl: RankedList) -> RankedList:
    """Position ``i`` of ``N`` scores ``(N - i) / (N - 1)``; a lone entry gets 1.0."""
    _require_entries(rl)
    n = len(rl)
    if n == 1:
        return rl.with_scores([1.0])
    return rl.with_scores([(n - 1 - i) / (n - 1) for i in range(n)])


def norm_none(rl: RankedList) -> RankedList:
    return rl


NORMALIZERS: dict[NormStrategy, Callable[[RankedList], RankedList]] = {
    NormStrategy.MIN_MAX: norm_min_max,
    NormStrategy.MAX: norm_max,
    NormStrategy.SUM: norm_sum,
    NormStrategy.ZMUV: norm_zmuv,
    NormStrategy.RANK: norm_rank,
    NormStrategy.BORDA: norm_borda,
    NormStrategy.NONE: norm_none,
}


def normalize(rl: RankedList, strategy) -> RankedList:
    """Apply the strategy named by ``strategy`` (enum member or token such as ``"min-max"``)."""
    return NORMALIZERS[NormStrategy.parse(strategy)](rl)
