"""Head/tail label partitioning, ranked metrics and fold aggregation.

Labels are split by the Pareto rule: sorted by training frequency, the top
20% (rounded up) are *head* labels and the rest *tail*. A head or tail view
of an evaluation filters both the gold set and the predicted list to that
partition before positions are computed, and queries whose filtered gold set
is empty are left out of the average rather than scored as zero.
"""

from __future__ import annotations

import enum
import math
import statistics
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .core import DatasetStats, Qrels, RankedList, Run
from .exceptions import (
    EmptyGold,
    EmptyLabelSpace,
    NoEvaluableQueries,
    TooFewFolds,
)

__all__ = [
    "LabelPartition",
    "Metric",
    "View",
    "MetricSpec",
    "Cell",
    "EvalReport",
    "partition_labels",
    "precision_at_k",
    "ndcg_at_k",
    "evaluate",
    "aggregate_folds",
    "render_cell",
    "dataset_stats",
]


@dataclass(frozen=True)
class LabelPartition:
    frequencies: Mapping[str, int]
    head: frozenset
    tail: frozenset

    @property
    def threshold_h(self) -> int:
        return len(self.head)

    def labels_for(self, view: "View") -> frozenset | None:
        """Labels kept by ``view``; ``None`` means keep everything."""
        view = View.parse(view)
        if view is View.HEAD:
            return self.head
        if view is View.TAIL:
            return self.tail
        return None


def partition_labels(frequencies: Mapping[str, int]) -> LabelPartition:
    """Split labels into head (top ``ceil(0.2 L)`` by frequency) and tail.

    Ties in frequency are broken by label ascending.
    """
    if not frequencies:
        raise EmptyLabelSpace("cannot partition an empty label space")
    ordered = sorted(frequencies, key=lambda label: (-frequencies[label], label))
    n_head = -(-len(ordered) // 5)  # ceil(L / 5) without float rounding
    return LabelPartition(
        MappingProxyType(dict(frequencies)),
        frozenset(ordered[:n_head]),
        frozenset(ordered[n_head:]),
    )


def _top_labels(ranking, k: int) -> list[str]:
    if isinstance(ranking, RankedList):
        return list(ranking.labels[:k])
    return list(ranking)[:k]


def precision_at_k(ranking, gold: Iterable[str], k: int) -> float:
    """Hits in the top ``k`` divided by ``k`` (even if the list is shorter).

    ``ranking`` is a :class:`RankedList` or any sequence of labels.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    gold = gold if isinstance(gold, (set, frozenset)) else set(gold)
    return sum(1 for label in _top_labels(ranking, k) if label in gold) / k


def _discounts(k: int) -> list[float]:
    return [1.0 / math.log2(i + 2) for i in range(k)]


def ndcg_at_k(ranking, gold: Iterable[str], k: int) -> float:
    """Binary-gain nDCG with ``log2(i + 1)`` discount and IDCG over ``min(k, |gold|)`` hits."""
    if k < 1:
        raise ValueError("k must be >= 1")
    gold = gold if isinstance(gold, (set, frozenset)) else set(gold)
    if not gold:
        raise EmptyGold("nDCG needs at least one relevant label")
    disc = _discounts(k)
    dcg = sum(disc[i] for i, label in enumerate(_top_labels(ranking, k)) if label in gold)
    idcg = sum(disc[: min(k, len(gold))])
    return dcg / idcg


class Metric(str, enum.Enum):
    PRECISION = "p"
    NDCG = "ndcg"

    @classmethod
    def parse(cls, token) -> "Metric":
        if isinstance(token, cls):
            return token
        key = str(token).strip().lower()
        aliases = {"p": cls.PRECISION, "precision": cls.PRECISION, "prec": cls.PRECISION,
                   "ndcg": cls.NDCG}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown metric {token!r} (choose from p, ndcg)") from None

    def __str__(self) -> str:
        return self.value


class View(str, enum.Enum):
    HEAD = "head"
    TAIL = "tail"
    ALL = "all"

    @classmethod
    def parse(cls, token) -> "View":
        if isinstance(token, cls):
            return token
        try:
            return cls(str(token).strip().lower())
        except ValueError:
            raise ValueError(f"unknown view {token!r} (choose from head, tail, all)") from None

    def __str__(self) -> str:
        return self.value


_METRIC_FUNCS = {Metric.PRECISION: precision_at_k, Metric.NDCG: ndcg_at_k}


@dataclass(frozen=True)
class MetricSpec:
    metric: Metric
    k: int
    view: View = View.ALL

    def __post_init__(self):
        object.__setattr__(self, "metric", Metric.parse(self.metric))
        object.__setattr__(self, "view", View.parse(self.view))
        if int(self.k) < 1:
            raise ValueError("k must be >= 1")
        object.__setattr__(self, "k", int(self.k))

    @classmethod
    def parse(cls, token: str, view="all") -> "MetricSpec":
        """Parse ``"p@5"`` / ``"ndcg@10"``."""
        name, sep, k = token.partition("@")
        if not sep:
            raise ValueError(f"metric token {token!r} must look like p@K or ndcg@K")
        return cls(Metric.parse(name), int(k), view)

    @property
    def token(self) -> str:
        return f"{self.metric.value}@{self.k}"


def evaluate(run: Run | Mapping[str, RankedList], qrels: Qrels,
             partition: LabelPartition | None, spec: MetricSpec) -> float:
    """Mean of ``spec.metric`` over the queries in ``qrels`` with a non-empty (restricted) gold set.

    Queries judged in ``qrels`` but missing from ``run`` are scored against an
    empty ranking. ``partition`` may be ``None`` for the ``all`` view.
    """
    lists = run.lists if isinstance(run, Run) else run
    keep = None
    if spec.view is not View.ALL:
        if partition is None:
            raise ValueError(f"the {spec.view.value} view needs a label partition")
        keep = partition.labels_for(spec.view)
    func = _METRIC_FUNCS[spec.metric]

    values = []
    for qid, gold in qrels.judgments.items():
        if keep is not None:
            gold = gold & keep
        if not gold:
            continue
        ranking = lists.get(qid)
        labels = ranking.labels if ranking is not None else ()
        if keep is not None:
            labels = [label for label in labels if label in keep]
        values.append(func(labels, gold, spec.k))
    if not values:
        raise NoEvaluableQueries(
            f"no query has relevant labels in the {spec.view.value} view")
    return math.fsum(values) / len(values)


def render_cell(mean: float, std: float) -> str:
    """``0.515, 0.017 -> "51.5(1.7)"``."""
    # str.format ignores the process locale, so the separator is always '.'
    m = f"{100 * mean:.1f}"
    s = f"{100 * std:.1f}"
    if m == "-0.0":
        m = "0.0"
    if s == "-0.0":
        s = "0.0"
    return f"{m}({s})"


def aggregate_folds(fold_values: Sequence[float]) -> tuple[float, float, str]:
    """Mean, sample standard deviation and the rendered ``M(S)`` cell of per-fold values."""
    values = [float(v) for v in fold_values]
    if len(values) < 2:
        raise TooFewFolds(f"need at least 2 fold values, got {len(values)}")
    mean = statistics.fmean(values)
    std = statistics.stdev(values)
    return mean, std, render_cell(mean, std)


@dataclass(frozen=True)
class Cell:
    mean: float
    std: float
    fold_values: tuple[float, ...]

    @classmethod
    def from_folds(cls, fold_values: Sequence[float]) -> "Cell":
        mean, std, _ = aggregate_folds(fold_values)
        return cls(mean, std, tuple(float(v) for v in fold_values))

    @property
    def rendered(self) -> str:
        return render_cell(self.mean, self.std)


# (normalization, method, metric, view, k)
CellKey = tuple[str, str, str, str, int]


@dataclass
class EvalReport:
    cells: dict[CellKey, Cell] = field(default_factory=dict)

    def add(self, normalization, method, metric, view, k: int, fold_values: Sequence[float]) -> Cell:
        key = (str(normalization), str(method), str(Metric.parse(metric)), str(View.parse(view)), int(k))
        cell = Cell.from_folds(fold_values)
        self.cells[key] = cell
        return cell

    def __len__(self) -> int:
        return len(self.cells)

    def sorted_items(self) -> list[tuple[CellKey, Cell]]:
        return sorted(self.cells.items(), key=lambda kv: kv[0])


def dataset_stats(qrels: Qrels, partition: LabelPartition) -> DatasetStats:
    """Table-style summary of a judged dataset under a head/tail partition.

    Instances per label is computed from the partition's frequency map, so
    pass training-split frequencies to get the usual convention.
    """
    n = len(qrels)
    n_labels = len(partition.frequencies)
    tail = head = 0
    for gold in qrels.judgments.values():
        tail += len(gold & partition.tail)
        head += len(gold & partition.head)
    return DatasetStats(
        n_instances=n,
        n_labels=n_labels,
        avg_tail_relevant=tail / n if n else 0.0,
        avg_head_relevant=head / n if n else 0.0,
        avg_instances_per_label=sum(partition.frequencies.values()) / n_labels if n_labels else 0.0,
    )
