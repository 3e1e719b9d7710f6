"""Domain types shared across rankfuse.

Every ranking in the package is a :class:`RankedList`: a query id plus
``(label, score)`` entries in canonical order, i.e. score descending with
ties broken by label ascending. Rank positions are 1-based indices into
``entries``; the rank-based normalizers and fusers read nothing else.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .exceptions import DuplicateLabel, NonFiniteScore, UnsortedEntries

__all__ = [
    "RankedList",
    "FusedList",
    "Run",
    "Qrels",
    "DatasetStats",
    "FusionConfig",
    "NormStrategy",
    "FusionMethod",
    "DEFAULT_DEPTH",
    "BENCHMARK_STATS",
    "canonical_key",
    "make_ranked_list",
]

DEFAULT_DEPTH = 128


def canonical_key(entry: tuple[str, float]) -> tuple[float, str]:
    """Sort key giving (score desc, label asc)."""
    label, score = entry
    return (-score, label)


@dataclass(frozen=True)
class RankedList:
    """One query's ordered candidates from one system.

    The raw constructor trusts the caller's order but still checks that
    labels are unique, scores finite and non-increasing. Use
    :func:`make_ranked_list` to build one from unsorted pairs.
    """

    query_id: str
    entries: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        entries = tuple((str(label), float(score)) for label, score in self.entries)
        object.__setattr__(self, "entries", entries)
        seen = set()
        prev = math.inf
        for label, score in entries:
            if not math.isfinite(score):
                raise NonFiniteScore(label, score)
            if label in seen:
                raise DuplicateLabel(label, self.query_id)
            if score > prev:
                raise UnsortedEntries(
                    f"query {self.query_id!r}: score of {label!r} exceeds its predecessor")
            seen.add(label)
            prev = score

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, float]]:
        return iter(self.entries)

    def __contains__(self, label) -> bool:
        return label in self.ranks

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.entries)

    @property
    def scores(self) -> tuple[float, ...]:
        return tuple(score for _, score in self.entries)

    @cached_property
    def ranks(self) -> Mapping[str, int]:
        """label -> 1-based rank."""
        return MappingProxyType({label: i for i, (label, _) in enumerate(self.entries, 1)})

    def rank(self, label: str) -> int:
        return self.ranks[label]

    def score_of(self, label: str) -> float:
        return self.entries[self.ranks[label] - 1][1]

    def with_scores(self, scores: Iterable[float]) -> "RankedList":
        """Same labels in the same order, new scores."""
        scores = list(scores)
        if len(scores) != len(self.entries):
            raise ValueError("score count does not match entry count")
        return RankedList(self.query_id, tuple(zip(self.labels, scores)))

    def restrict(self, keep) -> "RankedList":
        """Drop labels not in ``keep``; relative order is preserved."""
        return RankedList(self.query_id, tuple(e for e in self.entries if e[0] in keep))

    def truncate(self, depth: int) -> "RankedList":
        return RankedList(self.query_id, self.entries[:depth])


@dataclass(frozen=True)
class FusedList(RankedList):
    """A fused ranking; ``presence`` counts the input lists holding each label."""

    presence: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "presence", MappingProxyType(dict(self.presence)))


def make_ranked_list(query_id: str, pairs: Iterable[tuple[str, float]]) -> RankedList:
    """Build a canonically sorted :class:`RankedList` from ``(label, score)`` pairs.

    >>> make_ranked_list("q1", [("B", 3), ("A", 5)]).entries
    (('A', 5.0), ('B', 3.0))
    """
    items = []
    seen = set()
    for label, score in pairs:
        label = str(label)
        score = float(score)
        if not math.isfinite(score):
            raise NonFiniteScore(label, score)
        if label in seen:
            raise DuplicateLabel(label, query_id)
        seen.add(label)
        items.append((label, score))
    items.sort(key=canonical_key)
    return RankedList(query_id, tuple(items))


@dataclass(frozen=True)
class Run:
    """A system's ranked lists keyed by query id."""

    system_tag: str
    lists: Mapping[str, RankedList] = field(default_factory=dict)

    def __post_init__(self):
        lists = dict(self.lists)
        for qid, rl in lists.items():
            if not isinstance(rl, RankedList):
                raise TypeError(f"query {qid!r}: expected RankedList, got {type(rl).__name__}")
            if rl.query_id != qid:
                raise ValueError(f"list keyed {qid!r} carries query id {rl.query_id!r}")
        object.__setattr__(self, "lists", MappingProxyType(lists))

    @classmethod
    def from_lists(cls, system_tag: str, lists: Iterable[RankedList]) -> "Run":
        out = {}
        for rl in lists:
            if rl.query_id in out:
                raise ValueError(f"more than one list for query {rl.query_id!r}")
            out[rl.query_id] = rl
        return cls(system_tag, out)

    def __getitem__(self, query_id: str) -> RankedList:
        return self.lists[query_id]

    def __contains__(self, query_id) -> bool:
        return query_id in self.lists

    def __len__(self) -> int:
        return len(self.lists)

    def query_ids(self) -> list[str]:
        return sorted(self.lists)


@dataclass(frozen=True)
class Qrels:
    """Graded judgments per query; any grade > 0 counts as relevant.

    Grade-0 judgments are kept so files round-trip, but every metric in the
    package only looks at :attr:`judgments`.
    """

    grades: Mapping[str, Mapping[str, int]] = field(default_factory=dict)

    def __post_init__(self):
        frozen = {}
        for qid, labels in self.grades.items():
            row = {}
            for label, grade in labels.items():
                grade = int(grade)
                if grade < 0:
                    raise ValueError(f"negative relevance for ({qid!r}, {label!r})")
                row[str(label)] = grade
            frozen[str(qid)] = MappingProxyType(row)
        object.__setattr__(self, "grades", MappingProxyType(frozen))

    @classmethod
    def from_sets(cls, judgments: Mapping[str, Iterable[str]]) -> "Qrels":
        return cls({qid: {label: 1 for label in labels} for qid, labels in judgments.items()})

    @cached_property
    def judgments(self) -> Mapping[str, frozenset]:
        """query id -> set of relevant labels."""
        return MappingProxyType({
            qid: frozenset(label for label, g in row.items() if g > 0)
            for qid, row in self.grades.items()
        })

    def __getitem__(self, query_id: str) -> frozenset:
        return self.judgments[query_id]

    def __len__(self) -> int:
        return len(self.grades)

    def query_ids(self) -> list[str]:
        return sorted(self.grades)


@dataclass(frozen=True)
class DatasetStats:
    """Summary statistics of a multi-label dataset.

    ``n_labels`` is the label-space size; ``avg_tail_relevant`` and
    ``avg_head_relevant`` are per-instance averages of relevant tail/head
    labels; ``avg_instances_per_label`` is label assignments per label.
    """

    n_instances: int
    n_labels: int
    avg_tail_relevant: float
    avg_head_relevant: float
    avg_instances_per_label: float

    def __post_init__(self):
        for name in ("n_instances", "n_labels", "avg_tail_relevant",
                     "avg_head_relevant", "avg_instances_per_label"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


# Statistics of four public extreme multi-label benchmarks (training-split label counts).
BENCHMARK_STATS: Mapping[str, DatasetStats] = MappingProxyType({
    "Eurlex-4k": DatasetStats(19_314, 3_956, 1.07, 4.25, 20.79),
    "Wiki10-31k": DatasetStats(20_762, 30_938, 3.66, 15.1, 8.52),
    "Amazon-670k": DatasetStats(643_474, 670_091, 2.56, 2.83, 3.99),
    "AmazonCat-13k": DatasetStats(1_493_021, 13_330, 0.3, 4.75, 448.57),
})


class _TokenEnum(str, enum.Enum):
    """String enum parsed from loose CLI-style tokens."""

    @classmethod
    def parse(cls, token):
        if isinstance(token, cls):
            return token
        key = str(token).strip().lower().replace("_", "").replace("-", "")
        for member in cls:
            if member.value.replace("-", "") == key or member.name.lower().replace("_", "") == key:
                return member
        choices = ", ".join(m.value for m in cls)
        raise ValueError(f"unknown {cls.__name__} {token!r} (choose from {choices})")

    def __str__(self) -> str:
        return self.value


class NormStrategy(_TokenEnum):
    MIN_MAX = "min-max"
    MAX = "max"
    SUM = "sum"
    ZMUV = "zmuv"
    RANK = "rank"
    BORDA = "borda"
    NONE = "none"


class FusionMethod(_TokenEnum):
    COMB_MIN = "combmin"
    COMB_MAX = "combmax"
    COMB_MED = "combmed"
    COMB_SUM = "combsum"
    COMB_ANZ = "combanz"
    COMB_MNZ = "combmnz"
    ISR = "isr"
    LOG_ISR = "logisr"
    BORDA_FUSE = "bordafuse"
    CONDORCET = "condorcet"


@dataclass(frozen=True)
class FusionConfig:
    normalization: NormStrategy = NormStrategy.NONE
    method: FusionMethod = FusionMethod.COMB_SUM
    depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        object.__setattr__(self, "normalization", NormStrategy.parse(self.normalization))
        object.__setattr__(self, "method", FusionMethod.parse(self.method))
        if int(self.depth) < 1:
            raise ValueError("depth must be >= 1")
        object.__setattr__(self, "depth", int(self.depth))
