import json
import subprocess
import sys

import pytest

from subconvex import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_series_json(capsys):
    code, out, _ = run(capsys, "series", "--model", "l1", "--method", "closed", "--order", "12", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["counts"][-2:] == ["1192134", "5154794"]
    assert all(isinstance(c, str) for c in data["counts"])


@pytest.mark.parametrize(
    "argv",
    [
        ["series", "--model", "l1", "--order", "0"],
        ["series", "--model", "all", "--method", "closed"],
        ["series", "--model", "l2", "--method", "system"],
        ["series", "--model", "t1", "--method", "dp"],
        ["series", "--model", "xx"],
        ["series", "--model", "all", "--order", "40"],
        ["enumerate", "--model", "l2", "--classes"],
        ["enumerate", "--method", "dp"],
        ["analyze", "--digits", "0"],
        ["series", "--threads", "0"],
        [],
    ],
)
def test_usage_errors_exit_with_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_computation_failure_exits_with_1(capsys, monkeypatch):
    def boom(cfg):
        raise ArithmeticError("synthetic")

    monkeypatch.setitem(cli.COMMANDS, "series", boom)
    code, out, err = run(capsys, "series")
    assert code == 1 and out == "" and "synthetic" in err


def test_csv_layout(capsys):
    code, out, _ = run(capsys, "series", "--model", "cc", "--order", "4", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["n,count", "1,1", "2,3", "3,11", "4,42"]


def test_text_layout(capsys):
    code, out, _ = run(capsys, "series", "--model", "l2", "--method", "enum", "--order", "6", "--format", "text")
    assert code == 0
    assert out.splitlines()[-1] == "6 812"


def test_methods_agree(capsys):
    outs = set()
    for method in ("closed", "system", "dp", "enum"):
        code, out, _ = run(capsys, "series", "--model", "l1", "--method", method, "--order", "9")
        assert code == 0
        outs.add(json.dumps(json.loads(out)["counts"]))
    assert len(outs) == 1


def test_enumerate_with_classes(capsys):
    code, out, _ = run(capsys, "enumerate", "--model", "l1", "--max-area", "5", "--classes")
    assert code == 0
    data = json.loads(out)
    s_total = [sum(int(data["classes"][k][n]) for k in data["classes"] if k.startswith("S")) for n in range(5)]
    assert s_total == [int(c) for c in data["counts"]]
    assert data["last_column_heights"]["3"] == {"1": "7", "2": "3", "3": "1"}


def test_output_file_and_byte_identical_reruns(tmp_path, capsys):
    paths = []
    for threads in ("1", "2", "1"):
        p = tmp_path / f"out{len(paths)}.json"
        code, out, _ = run(
            capsys, "analyze", "--model", "l2", "--order", "30", "--threads", threads, "--output", str(p)
        )
        assert code == 0 and out == ""
        paths.append(p)
    blobs = {p.read_bytes() for p in paths}
    assert len(blobs) == 1


def test_analyze_level_one_reports_certified_interval(capsys):
    code, out, _ = run(capsys, "analyze", "--model", "l1", "--order", "60", "--digits", "12")
    assert code == 0
    data = json.loads(out)
    lo, hi = (float(x) for x in data["q_c"])
    assert lo <= 0.231527613159 <= hi
    assert data["tau_method"].startswith("certified")


def test_verify_series_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "series", "--order", "40", "--format", "text")
    assert code == 0
    assert "FAIL" not in out and out.strip().endswith("all checks passed")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "subconvex", "series", "--order", "3", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["n,count", "1,1", "2,3", "3,11"]
