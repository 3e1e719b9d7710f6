import csv
import io
import shutil

import pytest

from rankfuse.cli import main
from rankfuse.core import Qrels, Run, make_ranked_list
from rankfuse.io import parse_run_file, write_label_frequencies, write_qrels, write_run_file
from rankfuse.synth import SynthSpec, gen_benchmark, write_benchmark


@pytest.fixture
def small_files(tmp_path):
    bm25 = Run("bm25", {
        "q1": make_ranked_list("q1", [("a", 9.0), ("b", 7.5), ("c", 1.0)]),
        "q2": make_ranked_list("q2", [("d", 3.0), ("a", 2.0)]),
    })
    dense = Run("dense", {
        "q1": make_ranked_list("q1", [("c", 0.9), ("a", 0.8), ("e", 0.1)]),
        "q3": make_ranked_list("q3", [("b", 0.7)]),
    })
    write_run_file(bm25, tmp_path / "bm25.run")
    write_run_file(dense, tmp_path / "dense.run")
    write_qrels(Qrels.from_sets({"q1": {"a", "e"}, "q2": {"d"}}), tmp_path / "qrels.txt")
    write_label_frequencies({"a": 50, "b": 1, "c": 2, "d": 1, "e": 1}, tmp_path / "freqs.tsv")
    return tmp_path


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_fuse_writes_parseable_run(small_files, capsys):
    out_path = small_files / "fused.run"
    code, _, _ = run_cli(capsys, "fuse", "--run", small_files / "bm25.run", "--run", small_files / "dense.run",
                         "--norm", "zmuv", "--method", "combmnz", "--out", out_path)
    assert code == 0
    fused = parse_run_file(out_path)
    # q2 and q3 are fused over the lists that exist for them
    assert list(fused.query_ids()) == ["q1", "q2", "q3"]
    assert fused["q1"].labels[0] == "a"


def test_fuse_unknown_method_is_usage_error(small_files, capsys):
    out_path = small_files / "never.run"
    with pytest.raises(SystemExit) as exc:
        main(["fuse", "--run", str(small_files / "bm25.run"), "--method", "comb_best", "--out", str(out_path)])
    code = exc.value.code
    assert code == 1
    assert "usage" in capsys.readouterr().err
    assert not out_path.exists()


def test_fuse_single_run_identity(small_files, capsys):
    code, out, _ = run_cli(capsys, "fuse", "--run", small_files / "bm25.run", "--method", "combsum", "--norm", "none")
    assert code == 0
    fused = parse_run_file(io.StringIO(out))
    original = parse_run_file(small_files / "bm25.run")
    for qid in original.query_ids():
        assert fused[qid].entries == original[qid].entries


def test_fuse_thread_count_does_not_change_bytes(small_files, capsys):
    outs = []
    for threads in (1, 3):
        _, out, _ = run_cli(capsys, "fuse", "--run", small_files / "bm25.run", "--run", small_files / "dense.run",
                            "--method", "condorcet", "--threads", threads)
        outs.append(out)
    assert outs[0] == outs[1]


def test_fuse_malformed_input_is_data_error(tmp_path, capsys):
    bad = tmp_path / "bad.run"
    bad.write_text("q1 Q0 a 1 2.0 s\nq1 Q0 b\n")
    code, _, err = run_cli(capsys, "fuse", "--run", bad, "--method", "isr")
    assert code == 2 and "line 2" in err


def test_eval_grid_rows(small_files, capsys):
    code, out, _ = run_cli(capsys, "eval", "--run", small_files / "bm25.run", "--qrels", small_files / "qrels.txt",
                           "--freqs", small_files / "freqs.tsv", "--views", "head,tail", "--k", "1,5,10")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 2 * 2 * 3
    assert {(r["view"], r["metric"], r["k"]) for r in rows} == {
        (v, m, k) for v in ("head", "tail") for m in ("ndcg", "p") for k in ("1", "5", "10")}


def test_eval_perfect_run(tmp_path, capsys):
    write_run_file(Run("s", {"q1": make_ranked_list("q1", [("a", 1.0)])}), tmp_path / "r.run")
    write_qrels(Qrels.from_sets({"q1": {"a"}}), tmp_path / "q.txt")
    code, out, _ = run_cli(capsys, "eval", "--run", tmp_path / "r.run", "--qrels", tmp_path / "q.txt",
                           "--views", "all", "--k", "1")
    assert code == 0
    assert out.splitlines()[1:] == ["all,ndcg,1,1.0", "all,p,1,1.0"]


def test_eval_unknown_labels_only(small_files, capsys):
    write_qrels(Qrels.from_sets({"q1": {"zzz"}}), small_files / "unknown.txt")
    code, _, err = run_cli(capsys, "eval", "--run", small_files / "bm25.run", "--qrels", small_files / "unknown.txt",
                           "--freqs", small_files / "freqs.tsv")
    assert code == 2 and "error" in err


def test_split_labels(small_files, capsys):
    code, out, _ = run_cli(capsys, "split-labels", "--freqs", small_files / "freqs.tsv")
    assert code == 0
    assert out.splitlines()[0] == "a\t50\thead"
    assert sum(line.endswith("head") for line in out.splitlines()) == 1


def test_unknown_flag_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--bogus"])
    assert exc.value.code == 1
    assert "usage" in capsys.readouterr().err


@pytest.fixture(scope="module")
def bench_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("bench")
    spec = SynthSpec(n_labels=300, n_queries=100, seed=11, n_candidates=20)
    write_benchmark(gen_benchmark(spec, 5), root)
    return root


PIPELINE_GRID = ("--norm", "zmuv,min-max", "--method", "combmnz,isr",
                 "--views", "head,tail", "--k", "1,5,10", "--metrics", "ndcg,p")


def test_pipeline_cell_count_and_determinism(bench_dir, tmp_path, capsys):
    csv_a, csv_b = tmp_path / "a.csv", tmp_path / "b.csv"
    code, _, _ = run_cli(capsys, "pipeline", "--folds", bench_dir, *PIPELINE_GRID, "--format", "csv",
                         "--out", csv_a, "--threads", 1)
    assert code == 0
    run_cli(capsys, "pipeline", "--folds", bench_dir, *PIPELINE_GRID, "--format", "csv",
            "--out", csv_b, "--threads", 4)
    rows = list(csv.DictReader(csv_a.open()))
    assert len(rows) == 2 * 2 * 2 * 3 * 2
    assert csv_a.read_bytes() == csv_b.read_bytes()


def test_pipeline_table_output(bench_dir, capsys):
    code, out, _ = run_cli(capsys, "pipeline", "--folds", bench_dir, *PIPELINE_GRID)
    assert code == 0
    assert "Tail label" in out and "zmuv" in out


def test_identical_folds_have_zero_std(bench_dir, tmp_path, capsys):
    for i in range(3):
        shutil.copytree(bench_dir / "fold_0", tmp_path / f"fold_{i}")
    out = tmp_path / "r.csv"
    run_cli(capsys, "pipeline", "--folds", tmp_path, "--norm", "sum", "--method", "combsum",
            "--format", "csv", "--out", out)
    rows = list(csv.DictReader(out.open()))
    assert rows and all(float(r["std"]) == 0.0 for r in rows)


def test_pipeline_missing_artifact(bench_dir, tmp_path, capsys):
    shutil.copytree(bench_dir / "fold_0", tmp_path / "fold_0")
    shutil.copytree(bench_dir / "fold_1", tmp_path / "fold_1")
    (tmp_path / "fold_1" / "qrels.txt").unlink()
    code, _, err = run_cli(capsys, "pipeline", "--folds", tmp_path, "--norm", "sum", "--method", "combsum")
    assert code == 2 and "qrels" in err


def test_compare_fold_values(bench_dir, tmp_path, capsys):
    fa, fb = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli(capsys, "pipeline", "--folds", bench_dir, "--norm", "zmuv", "--method", "combmnz",
            "--views", "all", "--k", "5", "--metrics", "ndcg", "--out", tmp_path / "x", "--fold-values", fa)
    run_cli(capsys, "pipeline", "--folds", bench_dir, "--norm", "none", "--method", "combmin",
            "--views", "all", "--k", "5", "--metrics", "ndcg", "--out", tmp_path / "y", "--fold-values", fb)
    code, out, _ = run_cli(capsys, "compare", "--cells", fa, fb)
    assert code == 0
    row = list(csv.DictReader(io.StringIO(out)))[0]
    assert row["df"] == "4"
    assert row["significant"] in ("", "*")
    assert (row["significant"] == "*") == (float(row["p"]) < 0.05)


def test_compare_plain_columns(tmp_path, capsys):
    (tmp_path / "a.csv").write_text("value\n0.1\n0.2\n0.3\n0.4\n0.5\n")
    (tmp_path / "b.csv").write_text("value\n0.0\n0.0\n0.0\n0.0\n0.0\n")
    code, out, _ = run_cli(capsys, "compare", "--cells", tmp_path / "a.csv", tmp_path / "b.csv")
    assert code == 0
    t, df, p, marker = out.splitlines()[1].split(",")
    assert float(t) == pytest.approx(4.242640687119285) and df == "4"
    assert float(p) == pytest.approx(0.0132356, abs=1e-6) and marker == "*"
