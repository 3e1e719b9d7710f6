"""Score normalization, rank fusion and head/tail ranked evaluation."""

__version__ = "0.1.0"

from .core import (
    BENCHMARK_STATS,
    DEFAULT_DEPTH,
    DatasetStats,
    FusedList,
    FusionConfig,
    FusionMethod,
    NormStrategy,
    Qrels,
    RankedList,
    Run,
    make_ranked_list,
)
from .evaluation import (
    EvalReport,
    LabelPartition,
    Metric,
    MetricSpec,
    View,
    aggregate_folds,
    dataset_stats,
    evaluate,
    ndcg_at_k,
    partition_labels,
    precision_at_k,
    render_cell,
)
from .exceptions import RankFuseError
from .fuse import (
    borda_fuse,
    comb_anz,
    comb_max,
    comb_med,
    comb_min,
    comb_mnz,
    comb_sum,
    condorcet,
    fuse,
    fuse_runs,
    isr,
    log_isr,
)
from .normalize import (
    norm_borda,
    norm_max,
    norm_min_max,
    norm_rank,
    norm_sum,
    norm_zmuv,
    normalize,
)
from .stats import TTestResult, paired_t_test

__all__ = [
    "BENCHMARK_STATS",
    "DEFAULT_DEPTH",
    "DatasetStats",
    "FusedList",
    "FusionConfig",
    "FusionMethod",
    "NormStrategy",
    "Qrels",
    "RankedList",
    "Run",
    "make_ranked_list",
    "EvalReport",
    "LabelPartition",
    "Metric",
    "MetricSpec",
    "View",
    "aggregate_folds",
    "dataset_stats",
    "evaluate",
    "ndcg_at_k",
    "partition_labels",
    "precision_at_k",
    "render_cell",
    "RankFuseError",
    "borda_fuse",
    "comb_anz",
    "comb_max",
    "comb_med",
    "comb_min",
    "comb_mnz",
    "comb_sum",
    "condorcet",
    "fuse",
    "fuse_runs",
    "isr",
    "log_isr",
    "norm_borda",
    "norm_max",
    "norm_min_max",
    "norm_rank",
    "norm_sum",
    "norm_zmuv",
    "normalize",
    "TTestResult",
    "paired_t_test",
]
