import gzip
import io
import logging

import pytest
from hypothesis import given, settings, strategies as st

from rankfuse.core import Qrels, Run, make_ranked_list
from rankfuse.evaluation import EvalReport
from rankfuse.exceptions import (
    DuplicateJudgment,
    DuplicateLabel,
    EmptyReport,
    MalformedLine,
    MixedSystemTags,
    NegativeCount,
)
from rankfuse.fuse import comb_sum
from rankfuse.io import (
    FOLD_COLUMNS,
    REPORT_COLUMNS,
    format_run,
    parse_label_frequencies,
    parse_qrels,
    parse_run_file,
    read_fold_values,
    read_report_csv,
    render_fold_values,
    render_report,
    write_label_frequencies,
    write_qrels,
    write_run_file,
)


def text(s):
    return io.StringIO(s)


def test_parse_single_line():
    run = parse_run_file(text("q1 Q0 L123 1 12.7 bm25\n"))
    assert run.system_tag == "bm25"
    assert run["q1"].entries == (("L123", 12.7),)


def test_parse_reorders_by_score_and_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="rankfuse.io"):
        run = parse_run_file(text("q1 Q0 a 1 1.0 s\nq1 Q0 b 2 3.0 s\n"))
    assert run["q1"].labels == ("b", "a")
    assert "disagree" in caplog.text


def test_parse_run_errors():
    with pytest.raises(DuplicateLabel):
        parse_run_file(text("q1 Q0 L123 1 2 s\nq1 Q0 L123 2 1 s\n"))
    with pytest.raises(MalformedLine) as err:
        parse_run_file(text("q1 Q0 L1 1\n"))
    assert err.value.line_no == 1
    with pytest.raises(MixedSystemTags):
        parse_run_file(text("q1 Q0 a 1 2 s\nq1 Q0 b 2 1 t\n"))


@pytest.mark.parametrize("bad, line_no", [
    ("q1 Q0 a 1 2 s\n\nq1 Q0 b x 1 s\n", 3),
    ("q1 Q0 a 1 2 s\nq1 Q0 b 0 1 s\n", 2),
    ("q1 Q0 a 1 nan s\n", 1),
    ("q1 Q0 a 1 inf s\n", 1),
    ("q1 Q0 a 1 abc s\n", 1),
    ("q1 Q1 a 1 2 s\n", 1),
    ("q1 Q0 a 1 2 s extra\n", 1),
])
def test_malformed_run_line_numbers(bad, line_no):
    with pytest.raises(MalformedLine) as err:
        parse_run_file(text(bad))
    assert err.value.line_no == line_no


def test_parse_qrels():
    assert parse_qrels(text("q1 0 L123 1\n"))["q1"] == {"L123"}
    zero = parse_qrels(text("q1 0 L9 0\n"))
    assert zero["q1"] == frozenset() and zero.grades["q1"]["L9"] == 0
    three = parse_qrels(text("q1 0 a 1\nq1 0 b 1\nq1 0 c 2\n"))
    assert len(three["q1"]) == 3
    with pytest.raises(DuplicateJudgment):
        parse_qrels(text("q1 0 a 1\nq1 0 a 0\n"))
    with pytest.raises(MalformedLine) as err:
        parse_qrels(text("q1 0 a 1\nq1 0 b\n"))
    assert err.value.line_no == 2
    with pytest.raises(MalformedLine):
        parse_qrels(text("q1 0 a -1\n"))


def test_parse_label_frequencies():
    assert parse_label_frequencies(text("L1\t100\n")) == {"L1": 100}
    with pytest.raises(DuplicateLabel):
        parse_label_frequencies(text("L1\t1\nL1\t2\n"))
    with pytest.raises(NegativeCount):
        parse_label_frequencies(text("L1\t-3\n"))
    with pytest.raises(MalformedLine) as err:
        parse_label_frequencies(text("L1\t1\nL2\n"))
    assert err.value.line_no == 2


label_st = st.text(alphabet="ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghij0123456789_-:.", min_size=1, max_size=8)
score_st = st.floats(allow_nan=False, allow_infinity=False)


@settings(max_examples=200)
@given(st.dictionaries(label_st, st.dictionaries(label_st, score_st, min_size=1, max_size=12),
                       min_size=1, max_size=6))
def test_run_round_trip(data):
    run = Run("sys", {q: make_ranked_list(q, pairs.items()) for q, pairs in data.items()})
    assert parse_run_file(text(format_run(run))) == run


@settings(max_examples=200)
@given(st.dictionaries(label_st, st.dictionaries(label_st, st.integers(0, 3), max_size=8), max_size=6))
def test_qrels_round_trip(data):
    qrels = Qrels(data)
    buf = io.StringIO()
    write_qrels(qrels, buf)
    # queries with no judgments have no lines to carry them
    assert parse_qrels(text(buf.getvalue())) == Qrels({q: r for q, r in data.items() if r})


def test_file_round_trip_and_gzip(tmp_path):
    run = Run("dense", {"q1": make_ranked_list("q1", [("a", 0.25), ("b", -1.5)])})
    for name in ("r.run", "r.run.gz"):
        path = tmp_path / name
        write_run_file(run, path)
        assert parse_run_file(path) == run
    with gzip.open(tmp_path / "r.run.gz", "rt") as fh:
        assert fh.readline() == "q1 Q0 a 1 0.25 dense\n"
    freqs = {"x": 3, "y": 0}
    write_label_frequencies(freqs, tmp_path / "f.tsv")
    assert (tmp_path / "f.tsv").read_text() == "x\t3\ny\t0\n"
    assert parse_label_frequencies(tmp_path / "f.tsv") == freqs


def test_write_fused_lists_depth():
    lists = {"q1": comb_sum([make_ranked_list("q1", [("a", 3), ("b", 2), ("c", 1)])], depth=2),
             "q2": make_ranked_list("q2", [])}
    out = format_run(lists)
    assert out.splitlines() == ["q1 Q0 a 1 3.0 fused", "q1 Q0 b 2 2.0 fused"]


def _report():
    report = EvalReport()
    report.add("zmuv", "combmnz", "ndcg", "tail", 1, [0.5, 0.53])
    report.add("zmuv", "combmnz", "p", "head", 5, [0.2, 0.2, 0.2])
    report.add("min-max", "combsum", "ndcg", "tail", 1, [0.4, 0.41])
    return report


def test_render_csv():
    out = render_report(_report(), "csv")
    lines = out.splitlines()
    assert lines[0] == ",".join(REPORT_COLUMNS)
    assert len(lines) == 3 + 1
    assert lines[3].startswith("zmuv,combmnz,p,head,5,0.2") and lines[3].endswith(",0.0,20.0(0.0)")
    # normalization blocks follow the canonical strategy order
    assert lines[1].startswith("min-max,")


def test_render_csv_parses_back():
    report = _report()
    back = read_report_csv(text(render_report(report, "csv")))
    assert set(back.cells) == set(report.cells)
    for key, cell in report.cells.items():
        assert back.cells[key].mean == cell.mean and back.cells[key].std == cell.std


def test_render_table_blocks():
    out = render_report(_report(), "table")
    assert "nDCG x 100" in out and "Precision x 100" in out
    assert "51.5(2.1)" in out
    lines = out.splitlines()
    assert lines[-1].startswith("---")
    assert render_report(_report(), "table") == out


def test_render_empty():
    with pytest.raises(EmptyReport):
        render_report(EvalReport(), "csv")


def test_fold_values_round_trip():
    report = _report()
    csv_text = render_fold_values(report)
    assert csv_text.splitlines()[0] == ",".join(FOLD_COLUMNS)
    vals = read_fold_values(text(csv_text), {"normalization": "zmuv", "metric": "ndcg"})
    assert vals == [0.5, 0.53]
    with pytest.raises(ValueError):
        read_fold_values(text(csv_text), {"metric": "ndcg"})


def test_read_fold_values_plain_column():
    assert read_fold_values(text("value\n0.3\n0.1\n")) == [0.3, 0.1]
    with pytest.raises(MalformedLine):
        read_fold_values(text("score\n0.3\n"))
