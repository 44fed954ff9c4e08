import io
import json
import logging
import subprocess
import sys

import pytest

from purefields import cli, report
from purefields.cache import ResultCache


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("PUREFIELDS_CACHE", raising=False)


def test_classify_json():
    code, out, _ = call("classify", "4", "73", "--format", "json")
    assert code == 0
    assert out.startswith('{"verdict":"Monogenic","witness":[2,1,1],')
    obj = json.loads(out)
    assert obj["reason"] == "witness" and obj["m"] == "73"


def test_solvable_json():
    code, out, _ = call("solvable", "6", "5", "2", "--format", "json")
    assert code == 0 and json.loads(out)["solvable"] is False


def test_solvable_with_modulus():
    code, out, _ = call("solvable", "4", "1,32", "2", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["modulus"] == 32 and obj["solvable"] is False


def test_non_squarefree_is_usage_error():
    code, out, err = call("basis", "4", "12")
    assert code == 2 and out == "" and "not square-free" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["basis", "4"],
        ["basis", "2", "3"],
        ["classify", "4", "73", "--format", "csv"],
        ["index", "4", "5", "1", "1"],
        ["factors", "5", "7", "1", "0", "0", "0"],
        ["solvable", "4", "1,2,3", "2"],
        ["pattern", "4", "8"],
        ["verify-period", "4", "8"],
    ],
)
def test_usage_errors(argv):
    assert call(*argv)[0] == 2


def test_text_output_and_negative_m():
    code, out, _ = call("basis", "3", "-10")
    assert code == 0
    assert "elements: 1 x (1+2x+x^2)/3" in out or "elements: 1 x" in out
    assert "disc: -300" in out


def test_big_integers_are_strings():
    _, out, _ = call("basis", "8", "17", "--format", "json")
    obj = json.loads(out)
    assert obj["disc"] == str(-(2**10) * 17**7)
    assert obj["denominators"] == [1, 1, 1, 1, 2, 2, 4, 8]


def test_index_and_factors():
    _, out, _ = call("index", "4", "-3", "1", "1", "0", "--format", "json")
    assert json.loads(out)["index"] == "1"
    _, out, _ = call("factors", "4", "-3", "1", "1", "0", "--format", "json")
    assert json.loads(out)["factors"] == ["-1", "1"]


def test_search_and_n0_and_shift():
    _, out, _ = call("search", "5", "7", "--bound", "2", "--format", "json")
    assert json.loads(out)["index_one"] == [[0, 2, 1, -2]]
    _, out, _ = call("n0", "4", "--format", "json")
    assert json.loads(out)["n0_pow"] == "65536"
    code, out, _ = call("shift-check", "4", "5", "--format", "json")
    assert code == 0 and json.loads(out)["same_structure"] is True


def test_verify_period_csv_and_text():
    code, out, _ = call("verify-period", "4", "5", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n,r,k,m,status" and len(lines) == 17
    code, out, _ = call("verify-period", "3", "2", "--mode", "exhaustive", "--bound", "100")
    assert code == 0 and "n=3 r=2 k=0 m=2 status=pass" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["basis", "6", "17"],
        ["pattern", "8", "33"],
        ["index", "5", "7", "0", "-2", "-1", "2"],
        ["factors", "6", "26", "1", "2", "0", "-1", "1"],
        ["solvable", "6", "10", "3"],
        ["classify", "8", "-3"],
        ["search", "4", "-3", "--bound", "1"],
        ["verify-period", "5", "7", "--mode", "sampled", "--count", "5"],
        ["n0", "9"],
        ["shift-check", "3", "10"],
    ],
)
def test_json_roundtrip_and_revalidation(argv):
    code, out, _ = call(*argv, "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert report.render_json(obj) + "\n" == out
    assert report.check_report(obj)


def test_tampered_report_fails_revalidation():
    _, out, _ = call("classify", "4", "5", "--format", "json")
    obj = json.loads(out)
    obj["verdict"] = "Monogenic"
    assert not report.check_report(obj)
    _, out, _ = call("basis", "3", "10", "--format", "json")
    obj = json.loads(out)
    obj["disc"] = "-301"
    assert not report.check_report(obj)


# ---------------------------------------------------------------- cache

def test_cache_hit_is_byte_identical(tmp_path, monkeypatch):
    path = tmp_path / "cache.jsonl"
    first = call("classify", "6", "17", "--format", "json", "--cache", str(path))
    assert path.exists() and len(ResultCache(path)) == 1

    def boom(*a, **k):
        raise AssertionError("should have been served from the cache")

    monkeypatch.setattr(report, "classify_report", boom)
    second = call("classify", "6", "17", "--format", "json", "--cache", str(path))
    assert second == first


def test_cache_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "env.jsonl"
    monkeypatch.setenv("PUREFIELDS_CACHE", str(path))
    a = call("n0", "6")
    b = call("n0", "6")
    assert a == b and len(ResultCache(path)) == 1
    call("n0", "6", "--no-cache")
    assert len(ResultCache(path)) == 1


def test_cache_keys_distinguish_format(tmp_path):
    path = str(tmp_path / "c.jsonl")
    a = call("n0", "5", "--cache", path)
    b = call("n0", "5", "--format", "json", "--cache", path)
    assert a[1] != b[1] and len(ResultCache(path)) == 2


def test_corrupt_cache_lines_are_skipped(tmp_path, caplog):
    path = tmp_path / "c.jsonl"
    call("n0", "3", "--cache", str(path))
    good = path.read_text()
    rec = json.loads(good)
    rec["output"] = "tampered\n"
    path.write_text("{not json\n" + json.dumps(rec) + "\n")
    with caplog.at_level(logging.WARNING):
        code, out, _ = call("n0", "3", "--cache", str(path))
    assert code == 0 and "tampered" not in out and "n0: 3" in out
    assert sum("corrupt cache line" in r.message for r in caplog.records) == 2


def test_failure_exit_code_is_cached(tmp_path, monkeypatch):
    monkeypatch.setattr(report, "pattern_report", lambda n, m: ({"command": "pattern", "passed": False}, False))
    code, _, _ = call("pattern", "3", "10", "--cache", str(tmp_path / "c.jsonl"))
    assert code == 1
    monkeypatch.undo()
    assert call("pattern", "3", "10", "--cache", str(tmp_path / "c.jsonl"))[0] == 1


def test_deterministic_without_cache():
    assert call("search", "4", "73", "--bound", "2") == call("search", "4", "73", "--bound", "2")


# ---------------------------------------------------------------- jobs

def test_jobs_and_run_jobs(tmp_path):
    out_dir = tmp_path / "jobs"
    code, out, _ = call("jobs", "4", "--nodes", "2", "--residues", "5,13", "--out", str(out_dir), "--format", "json")
    files = json.loads(out)["files"]
    assert code == 0 and len(files) == 2
    rep = tmp_path / "report.txt"
    code, out, _ = call("run-jobs", *files, "--report", str(rep), "--format", "json")
    assert code == 0 and json.loads(out)["failures"] == 0
    assert all(line.startswith("n=4 r=") for line in rep.read_text().splitlines())


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "purefields.cli", "n0", "5"], capture_output=True, text=True)
    assert proc.returncode == 0 and "n0_pow: 9765625" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "purefields.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify-period" in proc.stdout
