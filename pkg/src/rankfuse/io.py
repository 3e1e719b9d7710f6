"""Readers and writers for run files, qrels, label frequencies and reports.

Run lines have six whitespace-separated fields::

    query_id Q0 label_id rank score system_tag

The stored rank is advisory: lists are re-sorted canonically from the
scores on read, and a warning is logged when the two disagree. Qrels lines
are ``query_id 0 label_id relevance``; label-frequency lines are
``label_id<TAB>count``. Paths ending in ``.gz`` are read and written
through gzip. Every reader also accepts an open text stream.
"""

from __future__ import annotations

import csv
import gzip
import io
import logging
import math
import os
from contextlib import contextmanager
from typing import Iterable, Iterator, Mapping, TextIO

from .core import FusionMethod, NormStrategy, Qrels, RankedList, Run, make_ranked_list
from .evaluation import Cell, EvalReport, Metric
from .exceptions import (
    DuplicateJudgment,
    DuplicateLabel,
    EmptyReport,
    IoFailure,
    MalformedLine,
    MixedSystemTags,
    NegativeCount,
)

__all__ = [
    "parse_run_file",
    "parse_qrels",
    "parse_label_frequencies",
    "write_run_file",
    "write_qrels",
    "write_label_frequencies",
    "format_run",
    "render_report",
    "render_fold_values",
    "read_report_csv",
    "read_fold_values",
    "REPORT_COLUMNS",
    "FOLD_COLUMNS",
]

log = logging.getLogger(__name__)

REPORT_COLUMNS = ("normalization", "method", "metric", "partition", "k", "mean", "std", "cell")
FOLD_COLUMNS = ("normalization", "method", "metric", "partition", "k", "fold", "value")


@contextmanager
def _open_text(source, mode: str = "r") -> Iterator[TextIO]:
    if hasattr(source, "read") or hasattr(source, "write"):
        yield source
        return
    path = os.fspath(source)
    if path.endswith(".gz"):
        fh = gzip.open(path, mode + "t", encoding="utf-8", newline="")
    else:
        fh = open(path, mode, encoding="utf-8", newline="")
    with fh:
        yield fh


def _fields(source) -> Iterator[tuple[int, str, list[str]]]:
    with _open_text(source) as fh:
        for line_no, line in enumerate(fh, 1):
            parts = line.split()
            if parts:
                yield line_no, line.rstrip("\r\n"), parts


def _parse_score(text: str, line_no: int, line: str) -> float:
    try:
        score = float(text)
    except ValueError:
        raise MalformedLine(line_no, f"score {text!r} is not a number", line) from None
    if not math.isfinite(score):
        raise MalformedLine(line_no, f"score {text!r} is not finite", line)
    return score


def parse_run_file(source) -> Run:
    """Read a six-column run file into a :class:`Run`."""
    pairs: dict[str, list[tuple[str, float]]] = {}
    stored_rank: dict[str, dict[str, int]] = {}
    tags: set[str] = set()
    for line_no, line, parts in _fields(source):
        if len(parts) != 6:
            raise MalformedLine(line_no, f"expected 6 fields, got {len(parts)}", line)
        qid, q0, label, rank_text, score_text, tag = parts
        if q0 != "Q0":
            raise MalformedLine(line_no, f"second field must be 'Q0', got {q0!r}", line)
        try:
            rank = int(rank_text)
        except ValueError:
            raise MalformedLine(line_no, f"rank {rank_text!r} is not an integer", line) from None
        if rank < 1:
            raise MalformedLine(line_no, f"rank {rank} is not positive", line)
        score = _parse_score(score_text, line_no, line)
        ranks = stored_rank.setdefault(qid, {})
        if label in ranks:
            raise DuplicateLabel(label, qid)
        ranks[label] = rank
        pairs.setdefault(qid, []).append((label, score))
        tags.add(tag)
    if len(tags) > 1:
        raise MixedSystemTags(tags)

    lists = {qid: make_ranked_list(qid, entries) for qid, entries in pairs.items()}
    mismatched = [
        qid for qid, rl in lists.items()
        if list(rl.labels) != sorted(rl.labels, key=lambda lab: (stored_rank[qid][lab], lab))
    ]
    if mismatched:
        log.warning("%d of %d queries have stored ranks that disagree with score order "
                    "(first: %s); using score order", len(mismatched), len(lists), mismatched[0])
    return Run(tags.pop() if tags else "", lists)


def parse_qrels(source) -> Qrels:
    """Read four-column qrels; relevance 0 is kept as an explicit non-relevant judgment."""
    grades: dict[str, dict[str, int]] = {}
    for line_no, line, parts in _fields(source):
        if len(parts) != 4:
            raise MalformedLine(line_no, f"expected 4 fields, got {len(parts)}", line)
        qid, zero, label, rel_text = parts
        if zero != "0":
            raise MalformedLine(line_no, f"second field must be '0', got {zero!r}", line)
        try:
            rel = int(rel_text)
        except ValueError:
            raise MalformedLine(line_no, f"relevance {rel_text!r} is not an integer", line) from None
        if rel < 0:
            raise MalformedLine(line_no, f"relevance {rel} is negative", line)
        row = grades.setdefault(qid, {})
        if label in row:
            raise DuplicateJudgment(qid, label, line_no)
        row[label] = rel
    return Qrels(grades)


def parse_label_frequencies(source) -> dict[str, int]:
    """Read ``label<TAB>count`` lines."""
    freqs: dict[str, int] = {}
    for line_no, line, parts in _fields(source):
        if len(parts) != 2:
            raise MalformedLine(line_no, f"expected label and count, got {len(parts)} fields", line)
        label, count_text = parts
        try:
            count = int(count_text)
        except ValueError:
            raise MalformedLine(line_no, f"count {count_text!r} is not an integer", line) from None
        if count < 0:
            raise NegativeCount(label, count, line_no)
        if label in freqs:
            raise DuplicateLabel(label)
        freqs[label] = count
    return freqs


def _as_lists(run) -> tuple[str, list[RankedList]]:
    if isinstance(run, Run):
        return run.system_tag, [run.lists[q] for q in sorted(run.lists)]
    if isinstance(run, Mapping):
        return "fused", [run[q] for q in sorted(run)]
    lists = sorted(run, key=lambda rl: rl.query_id)
    return "fused", lists


def format_run(run, system_tag: str | None = None) -> str:
    """Run-file text for a :class:`Run`, a mapping of lists, or an iterable of lists.

    Queries are emitted in id order and ranks renumbered 1..N. Scores use
    the shortest repr that reads back to the same double.
    """
    tag, lists = _as_lists(run)
    tag = system_tag or tag or "run"
    if any(ch.isspace() for ch in tag):
        raise ValueError(f"system tag {tag!r} contains whitespace")
    out = io.StringIO()
    for rl in lists:
        for rank, (label, score) in enumerate(rl.entries, 1):
            out.write(f"{rl.query_id} Q0 {label} {rank} {score!r} {tag}\n")
    return out.getvalue()


def _write_text(text: str, dest) -> None:
    try:
        with _open_text(dest, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc


def write_run_file(run, dest, system_tag: str | None = None) -> None:
    _write_text(format_run(run, system_tag), dest)


def write_qrels(qrels: Qrels, dest) -> None:
    out = io.StringIO()
    for qid in sorted(qrels.grades):
        row = qrels.grades[qid]
        for label in sorted(row):
            out.write(f"{qid} 0 {label} {row[label]}\n")
    _write_text(out.getvalue(), dest)


def write_label_frequencies(freqs: Mapping[str, int], dest) -> None:
    _write_text("".join(f"{label}\t{freqs[label]}\n" for label in sorted(freqs)), dest)


# -- reports ---------------------------------------------------------------

def _order(values: Iterable[str], enum_cls) -> list[str]:
    rank = {m.value: i for i, m in enumerate(enum_cls)}
    return sorted(set(values), key=lambda v: (rank.get(v, len(rank)), v))


_VIEW_ORDER = {"tail": 0, "head": 1, "all": 2}
_METRIC_ORDER = {Metric.NDCG.value: 0, Metric.PRECISION.value: 1}
_METRIC_TITLE = {Metric.NDCG.value: "nDCG x 100", Metric.PRECISION.value: "Precision x 100"}


def _report_keys(report: EvalReport):
    norms = _order((k[0] for k in report.cells), NormStrategy)
    methods = _order((k[1] for k in report.cells), FusionMethod)
    columns = sorted({(k[2], k[3], k[4]) for k in report.cells},
                     key=lambda c: (_METRIC_ORDER.get(c[0], 9), c[0], _VIEW_ORDER.get(c[1], 9), c[1], c[2]))
    return norms, methods, columns


def _csv_text(rows: Iterable[Iterable]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerows(rows)
    return out.getvalue()


def render_report(report: EvalReport, format: str = "table") -> str:
    """Render as ``csv`` (one row per cell) or an aligned ``table``.

    The table groups rows in normalization blocks, one row per method,
    with a ``mean(std)`` column per (metric, partition, k).
    """
    if not report.cells:
        raise EmptyReport("report has no cells")
    norms, methods, columns = _report_keys(report)
    if format == "csv":
        rows = [REPORT_COLUMNS]
        for norm in norms:
            for method in methods:
                for metric, view, k in columns:
                    cell = report.cells.get((norm, method, metric, view, k))
                    if cell is not None:
                        rows.append((norm, method, metric, view, k,
                                     repr(cell.mean), repr(cell.std), cell.rendered))
        return _csv_text(rows)
    if format != "table":
        raise ValueError(f"unknown report format {format!r}")

    header1, header2 = ["", ""], ["", ""]
    prev = (None, None)
    for metric, view, _ in columns:
        header1.append(_METRIC_TITLE.get(metric, metric) if metric != prev[0] else "")
        header2.append(f"{view.capitalize()} label" if (metric, view) != prev else "")
        prev = (metric, view)
    header3 = ["normalization", "method"] + [f"@{k}" for _, _, k in columns]
    body = []
    for norm in norms:
        block = []
        for method in methods:
            cells = [report.cells.get((norm, method, *col)) for col in columns]
            if all(c is None for c in cells):
                continue
            block.append([norm, method] + [c.rendered if c else "-" for c in cells])
        if block:
            body.append(block)
    all_rows = [header1, header2, header3] + [r for block in body for r in block]
    widths = [max(len(r[i]) for r in all_rows) for i in range(len(header3))]

    def fmt(row):
        left = [row[0].ljust(widths[0]), row[1].ljust(widths[1])]
        right = [cell.rjust(w) for cell, w in zip(row[2:], widths[2:])]
        return "  ".join(left + right).rstrip()

    rule = "-" * len(fmt(header3))
    lines = [fmt(header1), fmt(header2), fmt(header3), rule]
    for block in body:
        lines.extend(fmt(r) for r in block)
        lines.append(rule)
    return "\n".join(lines) + "\n"


def render_fold_values(report: EvalReport) -> str:
    """Long-format CSV of every cell's per-fold values (input for ``compare``)."""
    if not report.cells:
        raise EmptyReport("report has no cells")
    rows = [FOLD_COLUMNS]
    for (norm, method, metric, view, k), cell in report.sorted_items():
        for fold, value in enumerate(cell.fold_values):
            rows.append((norm, method, metric, view, k, fold, repr(value)))
    return _csv_text(rows)


def read_report_csv(source) -> EvalReport:
    """Read a CSV produced by ``render_report(..., "csv")``.

    Fold values are not stored in that format, so the returned cells carry
    an empty ``fold_values`` tuple.
    """
    with _open_text(source) as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != REPORT_COLUMNS:
            raise MalformedLine(1, f"expected header {','.join(REPORT_COLUMNS)}")
        report = EvalReport()
        for line_no, row in enumerate(reader, 2):
            try:
                key = (row["normalization"], row["method"], row["metric"],
                       row["partition"], int(row["k"]))
                cell = Cell(float(row["mean"]), float(row["std"]), ())
            except (TypeError, ValueError):
                raise MalformedLine(line_no, "bad report row") from None
            if cell.rendered != row["cell"]:
                raise MalformedLine(line_no, f"cell {row['cell']!r} does not match mean/std")
            report.cells[key] = cell
    return report


def read_fold_values(source, where: Mapping[str, str] | None = None,
                     column: str = "value") -> list[float]:
    """Pull one column of fold values from a CSV.

    Rows are filtered by ``where`` (column -> required value) and ordered by
    the ``fold`` column when present, else by file order.
    """
    where = dict(where or {})
    with _open_text(source) as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if column not in fields:
            raise MalformedLine(1, f"no {column!r} column")
        missing = [key for key in where if key not in fields]
        if missing:
            raise MalformedLine(1, f"no column(s) {', '.join(missing)} to filter on")
        picked = []
        for line_no, row in enumerate(reader, 2):
            if any(row[key] != value for key, value in where.items()):
                continue
            try:
                value = float(row[column])
                fold = int(row["fold"]) if "fold" in fields else len(picked)
            except (TypeError, ValueError):
                raise MalformedLine(line_no, "bad fold value row") from None
            picked.append((fold, value))
    folds = [f for f, _ in picked]
    if len(set(folds)) != len(folds):
        raise ValueError("selection matches more than one value per fold; narrow it with --where")
    return [v for _, v in sorted(picked)]
