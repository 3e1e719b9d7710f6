"""Fold-wise fuse-and-evaluate loop behind ``rankfuse pipeline``."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence

from .core import FusionConfig, Qrels, Run
from .evaluation import EvalReport, MetricSpec, View, evaluate, partition_labels
from .fuse import fuse_runs
from .io import parse_label_frequencies, parse_qrels, parse_run_file

__all__ = ["Fold", "MissingFoldArtifact", "load_fold", "load_folds", "metric_grid", "run_pipeline"]


class MissingFoldArtifact(FileNotFoundError):
    pass


@dataclass(frozen=True)
class Fold:
    """One test split: judged queries, the systems' runs and training label counts."""

    qrels: Qrels
    runs: tuple[Run, ...]
    frequencies: Mapping[str, int] = field(default_factory=dict)


def _find(directory: str, stem: str) -> str:
    for name in (stem, stem + ".gz"):
        path = os.path.join(directory, name)
        if os.path.isfile(path):
            return path
    raise MissingFoldArtifact(f"{directory}: no {stem} (or {stem}.gz)")


def load_fold(directory) -> Fold:
    """Read ``*.run[.gz]``, ``qrels.txt[.gz]`` and ``freqs.tsv[.gz]`` from one fold directory."""
    directory = os.fspath(directory)
    run_files = sorted(n for n in os.listdir(directory) if n.endswith((".run", ".run.gz")))
    if not run_files:
        raise MissingFoldArtifact(f"{directory}: no *.run files")
    runs = tuple(parse_run_file(os.path.join(directory, n)) for n in run_files)
    qrels = parse_qrels(_find(directory, "qrels.txt"))
    freqs = parse_label_frequencies(_find(directory, "freqs.tsv"))
    return Fold(qrels, runs, freqs)


def load_folds(directory) -> list[Fold]:
    """Load every sub-directory of ``directory`` as a fold, in name order."""
    directory = os.fspath(directory)
    if not os.path.isdir(directory):
        raise MissingFoldArtifact(f"{directory} is not a directory")
    subdirs = sorted(n for n in os.listdir(directory) if os.path.isdir(os.path.join(directory, n)))
    if not subdirs:
        raise MissingFoldArtifact(f"{directory} has no fold sub-directories")
    return [load_fold(os.path.join(directory, n)) for n in subdirs]


def metric_grid(metrics: Iterable, views: Iterable, ks: Iterable[int]) -> list[MetricSpec]:
    return [MetricSpec(m, k, v) for m, v, k in product(metrics, views, ks)]


def run_pipeline(folds: Sequence[Fold], norms: Iterable, methods: Iterable,
                 specs: Sequence[MetricSpec], depth: int = 128,
                 threads: int | None = None) -> EvalReport:
    """Fuse every fold with each (normalization, method) and aggregate metrics over folds."""
    configs = [FusionConfig(n, m, depth) for n, m in product(norms, methods)]
    partitions = [partition_labels(f.frequencies) if any(s.view is not View.ALL for s in specs)
                  else None for f in folds]
    values: dict[tuple, list[float]] = {}
    for fold, partition in zip(folds, partitions):
        for config in configs:
            fused = fuse_runs(fold.runs, config, threads=threads)
            for spec in specs:
                key = (config.normalization.value, config.method.value,
                       spec.metric.value, spec.view.value, spec.k)
                values.setdefault(key, []).append(evaluate(fused, fold.qrels, partition, spec))
    report = EvalReport()
    for key, fold_values in values.items():
        report.add(*key, fold_values)
    return report
