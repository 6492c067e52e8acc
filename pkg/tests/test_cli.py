import json
import subprocess
import sys

import pytest

from consecinv.cli import main, read_config
from consecinv.core import UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["count", "--pattern", "012", "--n", "8", "--method", "recurrence"], "13358"),
        (["count", "--pattern", "000", "--n", "8", "--method", "brute"], "28673"),
        (["count", "--pattern", "0123", "--n", "3"], "6"),
        (["count", "--pattern", "210", "--n", "8", "--method", "fast"], "34192"),
        (["count", "--pattern", "001", "--n", "3", "--refine", "0"], "2"),
        (["count", "--pattern", "0000", "--n", "8", "--method", "recurrence"], "37844"),
        (["sequence", "--pattern", "110", "--n-max", "8"], "1 2 6 23 109 618 4098 31173"),
        (["sequence", "--pattern", "101", "--n-max", "8"], "1 2 6 23 109 619 4113 31352"),
        (["sequence", "--pattern", "0", "--n-max", "3"], "0 0 0"),
        (["sequence", "--pattern", "012", "--n-max", "8", "--method", "fast"], "1 2 5 17 70 349 2017 13358"),
    ],
)
def test_examples(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.strip() == expected


def test_count_check_and_refine(capsys):
    code, out, _ = run(capsys, "count", "--pattern", "021", "--n", "8", "--refine", "3", "--check",
                       "--method", "recurrence")
    assert code == 0
    assert int(out) > 0


def test_sequence_formats(capsys):
    _, out, _ = run(capsys, "sequence", "--pattern", "001", "--n-max", "3", "--format", "bfile")
    assert out == "1 1\n2 2\n3 4\n"
    _, out, _ = run(capsys, "sequence", "--pattern", "001", "--n-max", "3", "--format", "bfile", "--offset", "0")
    assert out == "0 1\n1 2\n2 4\n"
    _, out, _ = run(capsys, "sequence", "--pattern", "001", "--n-max", "3", "--format", "csv")
    assert out == "n,count\n1,1\n2,2\n3,4\n"
    _, out, _ = run(capsys, "sequence", "--pattern", "001", "--n-max", "3", "--format", "json")
    assert json.loads(out)["values"] == [1, 2, 4]


def test_sequence_check(capsys):
    code, _, _ = run(capsys, "sequence", "--pattern", "120", "--n-max", "8", "--check")
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--pattern", "0102", "--n", "5", "--method", "recurrence"],
        ["count", "--pattern", "01a", "--n", "3"],
        ["count", "--pattern", "022", "--n", "3"],
        ["count", "--pattern", "0123456", "--n", "3"],
        ["count", "--pattern", "012", "--n", "13"],
        ["count", "--pattern", "012"],
        ["count", "--pattern", "010", "--n", "5", "--method", "fast"],
        ["sequence", "--pattern", "0102", "--n-max", "5", "--check"],
        ["classify", "--length", "3", "--n-max", "9", "--level", "superstrong"],
        ["classify", "--patterns", "01,010", "--n-max", "4"],
        ["classify", "--length", "3", "--n-max", "4", "--level", "weak"],
        ["verify", "nonsense"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0


def test_classify_examples(capsys):
    code, out, _ = run(capsys, "classify", "--length", "3", "--n-max", "8", "--level", "superstrong")
    data = json.loads(out)
    assert code == 0 and data["num_classes"] == 12
    assert ["100", "110"] in data["classes"]
    _, out, _ = run(capsys, "classify", "--length", "1", "--n-max", "3", "--level", "wilf")
    assert json.loads(out)["classes"] == [["0"]]
    _, out, _ = run(capsys, "classify", "--patterns", "0021 0121 0102", "--n-max", "6")
    assert json.loads(out)["classes"] == [["0021", "0121"], ["0102"]]


def test_classify_length4_ten_terms(capsys):
    code, out, _ = run(capsys, "classify", "--length", "4", "--n-max", "10", "--level", "wilf")
    assert code == 0
    assert json.loads(out)["num_classes"] == 53


def test_deterministic_output(capsys):
    argv = ["classify", "--length", "3", "--n-max", "6", "--level", "strong"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == first


def test_timestamp_flag(capsys):
    _, out, _ = run(capsys, "sequence", "--pattern", "001", "--n-max", "3", "--format", "bfile", "--timestamp")
    assert out.startswith("# generated ")
    _, out, _ = run(capsys, "count", "--pattern", "001", "--n", "3", "--format", "json", "--timestamp")
    assert "generated_at" in json.loads(out)


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sequence defaults\npattern = 110\nn-max = 5\nformat = csv\n")
    code, out, _ = run(capsys, "sequence", "--config", str(cfg))
    assert code == 0
    assert out.splitlines()[-1] == "5,109"
    code, out, _ = run(capsys, "sequence", "--config", str(cfg), "--n-max", "3", "--format", "text")
    assert out.strip() == "1 2 6"


def test_config_file_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "sequence", "--config", str(cfg))[0] == 2
    cfg.write_text("check = maybe\n")
    assert run(capsys, "sequence", "--config", str(cfg))[0] == 2
    cfg.write_text("no equals sign\n")
    with pytest.raises(UsageError):
        read_config(cfg)
    assert run(capsys, "sequence", "--config", str(tmp_path / "missing.cfg"))[0] == 2


@pytest.mark.parametrize(
    "suite",
    ["tables3and4", "recurrences-vs-brute", "derangement-identity", "permutation-correspondences"],
)
def test_verify_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", suite)
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert all(c["ok"] for c in report["suites"][suite]["claims"])


def test_verify_tables_counts_claims(capsys):
    _, out, _ = run(capsys, "verify", "tables3and4")
    claims = json.loads(out)["suites"]["tables3and4"]["claims"]
    assert len(claims) == 13
    assert all(len(c["expected"]) == 8 for c in claims)


def test_verify_theorem_length4(capsys):
    code, out, _ = run(capsys, "verify", "theorem-length4")
    assert code == 0
    claims = json.loads(out)["suites"]["theorem-length4"]["claims"]
    assert len(claims) == 15
    assert claims[-1]["num_classes"] == 55


def test_verify_theorem_length4_at_ten_terms_fails(capsys):
    code, out, err = run(capsys, "verify", "theorem-length4", "--n-max", "10")
    assert code == 1
    last = json.loads(out)["suites"]["theorem-length4"]["claims"][-1]
    assert last["extra_merges"] == [["3012", "3021", "3102", "3201"]]
    assert "verification failed" in err


def test_verify_bijections_small(capsys):
    code, out, _ = run(capsys, "verify", "bijections", "--n-max", "7")
    assert code == 0
    assert json.loads(out)["passed"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "consecinv", "count", "--pattern", "001", "--n", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "4"
