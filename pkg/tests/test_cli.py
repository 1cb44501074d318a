import json
import subprocess
import sys

import pytest

from itercompare.cli import corpus_entries, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_corpus_list(capsys):
    code, out, _ = run_cli(capsys, "corpus", "list")
    assert code == 0
    names = [line.split("\t")[0] for line in out.splitlines()]
    assert {"example1", "picard_vs_mann", "self_comparison"} <= set(names)


def test_exit_zero_when_all_conclusive(capsys):
    code, out, _ = run_cli(capsys, "corpus", "run", "picard_vs_mann")
    assert code == 0
    assert "left_faster" in out and "right_faster" in out


def test_exit_two_on_inconclusive(capsys):
    code, out, _ = run_cli(capsys, "corpus", "run", "example1", "--horizon", "1000")
    assert code == 2
    assert "inconclusive" in out


def test_exit_one_on_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("id: x\ncomparators: [popescu]\nleft: {}\nright: {}\n")
    code, _, err = run_cli(capsys, "run", str(bad))
    assert code == 1 and "error:" in err
    code, _, err = run_cli(capsys, "run", str(tmp_path / "missing.yaml"))
    assert code == 1
    code, _, err = run_cli(capsys, "corpus", "run", "nope")
    assert code == 1 and "unknown corpus" in err


def test_generation_error_exit_one(capsys, tmp_path):
    cfg = tmp_path / "alpha.yaml"
    cfg.write_text("""
id: bad-alpha
horizon: 10
metric: absolute
comparators: [popescu]
left: {operator: "x1/2", scheme: picard, x0: [1]}
right: {operator: "x1/2", scheme: {kind: mann, alpha: "1.5"}, x0: [1]}
""")
    code, _, err = run_cli(capsys, "run", str(cfg))
    assert code == 1 and "outside [0, 1]" in err


def test_run_formats_and_out(capsys, tmp_path):
    path = corpus_entries()["picard_vs_mann"]
    out = tmp_path / "r.jsonl"
    code, stdout, _ = run_cli(capsys, "run", str(path), "--format", "jsonl", "--out", str(out))
    assert code == 0 and stdout == ""
    lines = out.read_text().splitlines()
    assert all(json.loads(line)["experiment"] == "picard-vs-mann" for line in lines)
    code, stdout, _ = run_cli(capsys, "run", str(path), "--format", "csv", "--horizon", "10")
    assert stdout.splitlines()[0].startswith("experiment,n,e_left,e_right,ratio")
    assert len(stdout.splitlines()) == 12


def test_estimator_flags_reach_the_comparators(capsys):
    path = str(corpus_entries()["example1"])
    code, stdout, _ = run_cli(capsys, "run", path, "--format", "jsonl", "--horizon", "200",
                              "--window-frac", "0.5", "--limit-tol", "2")
    recs = [json.loads(line) for line in stdout.splitlines()]
    pop = [r for r in recs if r["comparator"] == "popescu"][0]
    assert pop["evidence"][0]["window_len"] == 101


def test_require_bounds_vanish_flag(capsys, tmp_path):
    cfg = tmp_path / "const.yaml"
    cfg.write_text("""
id: constant-bounds
horizon: 50
metric: absolute
comparators: [berinde27]
bounds_mode: user-supplied
bounds: {left: {expr: "1"}, right: {expr: "2"}}
left: {operator: "x1/2", scheme: picard, x0: [1]}
right: {operator: "x1/2", scheme: picard, x0: [1]}
""")
    code, _, err = run_cli(capsys, "run", str(cfg))
    assert code == 1 and "does not tend to 0" in err
    code, out, _ = run_cli(capsys, "run", str(cfg), "--require-bounds-vanish", "false")
    assert code == 0 and "same_rate" in out


def test_demonstrate_prints_contradiction(capsys):
    path = str(corpus_entries()["self_comparison"])
    code, out, _ = run_cli(capsys, "demonstrate", path)
    assert code == 0
    assert "contradiction: left is faster AND right is faster" in out
    assert "forward" in out and "reverse" in out


def test_plot_dir_writes_png(capsys, tmp_path):
    pytest.importorskip("matplotlib")
    code, _, _ = run_cli(capsys, "corpus", "run", "picard_vs_mann", "--plot-dir",
                         str(tmp_path / "figs"))
    assert code == 0
    png = tmp_path / "figs" / "picard-vs-mann.png"
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "itercompare", "corpus", "list"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "example1" in proc.stdout
