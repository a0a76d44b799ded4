import subprocess
import sys

import numpy as np
import pytest

from enose_fis import modelfile
from enose_fis.cli import main
from enose_fis.data import BASELINE, RESPONSE_PROFILES, read_csv, volts_to_adc


@pytest.fixture(scope="module")
def trained(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    data, model = root / "s.csv", root / "m.txt"
    assert main(["generate", "--out", str(data), "--seed", "1"]) == 0
    assert main(["train", "--data", str(data), "--model-out", str(model)]) == 0
    return data, model


def test_generate_defaults(trained):
    ds = read_csv(trained[0])
    assert ds.labels == ("papaya", "orange", "apple")
    assert [len(b) for b in ds.blocks] == [800] * 3


def test_generate_minimal_and_custom_objects(tmp_path):
    out = tmp_path / "tiny.csv"
    assert main(["generate", "--out", str(out), "--samples-per-object", "2", "--objects", "onion,guava,banana"]) == 0
    ds = read_csv(out)
    assert ds.labels == ("onion", "guava", "banana")
    assert [len(b) for b in ds.blocks] == [2, 2, 2]


def test_generate_requires_out(capsys):
    with pytest.raises(SystemExit) as info:
        main(["generate"])
    assert info.value.code != 0
    assert "--out" in capsys.readouterr().err


def test_train_writes_model_and_trace(trained, capsys, tmp_path):
    mf = modelfile.load(trained[1])
    assert mf.model.m == 10 and mf.model.combinator.value == "sum"
    assert mf.train_config.eta == 0.1 and mf.train_config.seed == 1
    out = tmp_path / "b.txt"
    assert main(["train", "--data", str(trained[0]), "--rules", "20", "--combinator", "product",
                 "--epochs", "2", "--model-out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert printed.startswith("epoch,training_rmse\n0,")
    assert "m=20 combinator=product" in printed
    assert modelfile.load(out).model.m == 20


def test_train_rejects_bad_eta(trained, capsys, tmp_path):
    code = main(["train", "--data", str(trained[0]), "--eta", "1.5", "--model-out", str(tmp_path / "x")])
    assert code != 0
    err = capsys.readouterr().err
    assert "(0, 1)" in err and len(err.strip().splitlines()) == 1


def test_evaluate_prints_and_writes_matrix(trained, capsys, tmp_path):
    report = tmp_path / "cm.csv"
    assert main(["evaluate", "--data", str(trained[0]), "--model", str(trained[1]), "--report-out", str(report)]) == 0
    assert "efficiency: 100.00%" in capsys.readouterr().out
    lines = report.read_text().splitlines()
    assert lines[0] == "output/input,papaya,orange,apple"
    assert lines[-1] == "efficiency,100.00"


def test_evaluate_rejects_mismatched_labels(trained, tmp_path, capsys):
    other = tmp_path / "o.csv"
    main(["generate", "--out", str(other), "--samples-per-object", "40", "--objects", "onion,guava,banana"])
    capsys.readouterr()
    assert main(["evaluate", "--data", str(other), "--model", str(trained[1])]) == 1
    assert "unknown label" in capsys.readouterr().err


def stream_lines(label, count, seed=0):
    rng = np.random.default_rng(seed)
    level = np.array(BASELINE) + np.array(RESPONSE_PROFILES[label])
    return [",".join(map(str, volts_to_adc(level + rng.normal(0, 0.02, 5)))) for _ in range(count)]


def test_classify_recognizes_object_two(trained, tmp_path, capsys):
    lines = stream_lines("orange", 50)
    lines.insert(7, "garbage")
    source = tmp_path / "stream.txt"
    source.write_text("\n".join(lines) + "\n")
    assert main(["classify", "--model", str(trained[1]), "--input", str(source)]) == 0
    captured = capsys.readouterr()
    windows = captured.out.strip().splitlines()
    assert len(windows) == 2
    assert all("label=orange" in w for w in windows)
    assert "line 8" in captured.err and "garbage" in captured.err


def test_classify_partial_window_and_window_flag(trained, tmp_path, capsys):
    source = tmp_path / "s.txt"
    source.write_text("\n".join(stream_lines("apple", 12)) + "\n")
    assert main(["classify", "--model", str(trained[1]), "--input", str(source), "--window", "5"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert [line.split()[2] for line in out] == ["samples=5", "samples=5", "samples=2"]
    assert all("label=apple" in line for line in out)


def test_classify_empty_input(trained, tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    assert main(["classify", "--model", str(trained[1]), "--input", str(empty)]) == 1
    assert "no samples" in capsys.readouterr().err


def test_classify_reads_stdin(trained):
    text = "\n".join(stream_lines("papaya", 25)) + "\n"
    proc = subprocess.run(
        [sys.executable, "-m", "enose_fis", "classify", "--model", str(trained[1])],
        input=text, capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "label=papaya" in proc.stdout


def test_compare_identical_configs(trained, capsys, tmp_path):
    report = tmp_path / "cmp.csv"
    args = ["compare", "--data", str(trained[0]), "--epochs-a", "2", "--epochs-b", "2",
            "--rules-b", "10", "--combinator-b", "sum", "--report-out", str(report)]
    assert main(args) == 0
    out = capsys.readouterr().out
    assert "seeds differ" not in out
    rows = [line.split(",") for line in report.read_text().splitlines()[1:]]
    assert all(a == b for _, a, b in rows)


def test_compare_notes_seed_difference(trained, capsys):
    args = ["compare", "--data", str(trained[0]), "--epochs-a", "1", "--epochs-b", "1", "--seed-b", "2"]
    assert main(args) == 0
    assert "seeds differ (A=1, B=2)" in capsys.readouterr().out


def test_module_entry_point_reports_errors(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "enose_fis", "evaluate", "--data", str(tmp_path / "nope.csv"),
         "--model", str(tmp_path / "nope.txt")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert proc.stderr.startswith("error:")
