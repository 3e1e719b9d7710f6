"""Command-line interface.

Exit codes: 0 on success, 1 on usage errors (unknown flag or token), 2 on
bad or missing data. Diagnostics always go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from typing import Callable, Sequence

from . import __version__
from .core import FusionConfig, FusionMethod, NormStrategy
from .evaluation import Metric, View, evaluate, partition_labels
from .exceptions import RankFuseError
from .fuse import default_threads, fuse_runs
from .io import (
    format_run,
    parse_label_frequencies,
    parse_qrels,
    parse_run_file,
    read_fold_values,
    render_fold_values,
    render_report,
)
from .pipeline import MissingFoldArtifact, load_folds, metric_grid, run_pipeline
from .stats import paired_t_test

log = logging.getLogger("rankfuse")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _token(parse: Callable) -> Callable[[str], object]:
    def convert(text: str):
        try:
            return parse(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    convert.__name__ = getattr(parse, "__name__", "token")
    return convert


def _comma_list(parse: Callable) -> Callable[[str], list]:
    def convert(text: str):
        items = [t for t in text.split(",") if t.strip()]
        if not items:
            raise argparse.ArgumentTypeError("empty list")
        try:
            out = [parse(t.strip()) for t in items]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
        return list(dict.fromkeys(out))
    return convert


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(f"expected a positive integer, got {text}")
    return value


def _key_value(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key, value


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _threads(args) -> int:
    return args.threads if args.threads else default_threads()


def cmd_fuse(args) -> int:
    runs = [parse_run_file(path) for path in args.run]
    config = FusionConfig(args.norm, args.method, args.depth)
    fused = fuse_runs(runs, config, threads=_threads(args))
    _emit(format_run(fused), args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    run = parse_run_file(args.run)
    qrels = parse_qrels(args.qrels)
    partition = None
    if any(v is not View.ALL for v in args.views):
        if args.freqs is None:
            raise RankFuseError("--freqs is required for head/tail views")
        partition = partition_labels(parse_label_frequencies(args.freqs))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("view", "metric", "k", "value"))
    for spec in metric_grid(args.metrics, args.views, args.k):
        value = evaluate(run, qrels, partition, spec)
        writer.writerow((spec.view.value, spec.metric.value, spec.k, repr(value)))
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_split_labels(args) -> int:
    freqs = parse_label_frequencies(args.freqs)
    partition = partition_labels(freqs)
    ordered = sorted(freqs, key=lambda label: (-freqs[label], label))
    lines = [f"{label}\t{freqs[label]}\t{'head' if label in partition.head else 'tail'}\n"
             for label in ordered]
    _emit("".join(lines), args.out)
    log.info("%d head / %d tail labels", len(partition.head), len(partition.tail))
    return EXIT_OK


def cmd_compare(args) -> int:
    where = dict(args.where or [])
    a = read_fold_values(args.cells[0], where, args.column)
    b = read_fold_values(args.cells[1], where, args.column)
    result = paired_t_test(a, b)
    marker = "*" if result.significant_at_05 else ""
    if result.degenerate_variance:
        log.warning("fold differences have zero variance; p reported as 0")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("t", "df", "p", "significant"))
    writer.writerow((repr(result.t_statistic), result.degrees_of_freedom,
                     repr(result.p_value), marker))
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_pipeline(args) -> int:
    folds = load_folds(args.folds)
    specs = metric_grid(args.metrics, args.views, args.k)
    report = run_pipeline(folds, args.norm, args.method, specs,
                          depth=args.depth, threads=_threads(args))
    _emit(render_report(report, args.format), args.out)
    if args.fold_values:
        _emit(render_fold_values(report), args.fold_values)
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synth import SynthSpec, gen_benchmark, write_benchmark

    spec = SynthSpec(n_labels=args.labels, n_queries=args.queries, zipf_exponent=args.zipf,
                     gold_per_query=args.gold, noise=args.noise, seed=args.seed,
                     n_candidates=args.candidates)
    paths = write_benchmark(gen_benchmark(spec, args.folds), args.out)
    log.info("wrote %d folds under %s", len(paths), args.out)
    return EXIT_OK


def _add_threads(p):
    p.add_argument("--threads", type=_token(_positive_int), default=None,
                   help="worker threads (default: $RANKFUSE_THREADS or CPU count)")


def _add_eval_grid(p, default_views="head,tail"):
    p.add_argument("--views", type=_comma_list(View.parse), default=_comma_list(View.parse)(default_views),
                   help=f"comma list of head, tail, all (default {default_views})")
    p.add_argument("--k", type=_comma_list(_positive_int), default=[1, 5, 10],
                   help="comma list of cutoffs (default 1,5,10)")
    p.add_argument("--metrics", type=_comma_list(Metric.parse), default=[Metric.NDCG, Metric.PRECISION],
                   help="comma list of ndcg, p (default ndcg,p)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rankfuse", description="Normalize, fuse and evaluate ranked label lists.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="{fuse,eval,split-labels,compare,pipeline}")

    p = sub.add_parser("fuse", help="fuse run files query by query")
    p.add_argument("--run", action="append", required=True, metavar="FILE", help="input run (repeatable)")
    p.add_argument("--norm", type=_token(NormStrategy.parse), default=NormStrategy.NONE,
                   help="min-max, max, sum, zmuv, rank, borda or none (default none)")
    p.add_argument("--method", type=_token(FusionMethod.parse), required=True,
                   help=", ".join(m.value for m in FusionMethod))
    p.add_argument("--depth", type=_token(_positive_int), default=128)
    p.add_argument("--out", metavar="FILE", help="output run file (default stdout)")
    _add_threads(p)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("eval", help="P@k / nDCG@k of one run per label partition")
    p.add_argument("--run", required=True, metavar="FILE")
    p.add_argument("--qrels", required=True, metavar="FILE")
    p.add_argument("--freqs", metavar="FILE", help="label<TAB>count file (needed for head/tail)")
    _add_eval_grid(p)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("split-labels", help="head/tail split of a label-frequency file")
    p.add_argument("--freqs", required=True, metavar="FILE")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_split_labels)

    p = sub.add_parser("compare", help="paired t-test between two fold-value columns")
    p.add_argument("--cells", nargs=2, required=True, metavar=("A.csv", "B.csv"))
    p.add_argument("--where", action="append", type=_key_value, metavar="COL=VALUE",
                   help="keep rows with COL == VALUE in both files (repeatable)")
    p.add_argument("--column", default="value", help="column holding fold values (default value)")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("pipeline", help="fuse + evaluate every fold and render the grid")
    p.add_argument("--folds", required=True, metavar="DIR")
    p.add_argument("--norm", type=_comma_list(NormStrategy.parse), required=True)
    p.add_argument("--method", type=_comma_list(FusionMethod.parse), required=True)
    _add_eval_grid(p)
    p.add_argument("--depth", type=_token(_positive_int), default=128)
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--fold-values", metavar="FILE", help="also write per-fold values (long CSV)")
    _add_threads(p)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("synth", help=argparse.SUPPRESS)
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--folds", type=_token(_positive_int), default=5)
    p.add_argument("--queries", type=_token(_positive_int), default=2000)
    p.add_argument("--labels", type=_token(_positive_int), default=5000)
    p.add_argument("--zipf", type=float, default=1.0)
    p.add_argument("--gold", type=_token(_positive_int), default=5)
    p.add_argument("--noise", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--candidates", type=_token(_positive_int), default=64)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (RankFuseError, MissingFoldArtifact, OSError, ValueError) as exc:
        print(f"rankfuse {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
