import json
import subprocess
import sys

import pytest

from d4count.cli import EXIT_CAPACITY, EXIT_DOMAIN, EXIT_IO, EXIT_OK, main


def run(*argv):
    return subprocess.run([sys.executable, "-m", "d4count", *argv], capture_output=True, text=True)


def test_census_stdout_and_files(tmp_path, capsys):
    assert main(["census", "--bound", "2e3", "--out", str(tmp_path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["X"] == 2000
    assert out["pair_count"] == 2 * out["N_D4"] + out["N_C4"] + 3 * out["N_V4"]
    for name in ("records.jsonl", "summary.csv", "checkpoint.json", "report.json"):
        assert (tmp_path / name).exists()


def test_census_resume(tmp_path, capsys):
    main(["census", "--bound", "1500", "--out", str(tmp_path / "a")])
    full = json.loads(capsys.readouterr().out)
    from d4count.census import run_census

    run_census(1500, out_dir=tmp_path / "b", stop_after=3)
    ck = tmp_path / "b" / "checkpoint.json"
    assert main(["census", "--bound", "1500", "--out", str(tmp_path / "b"), "--resume", str(ck)]) == EXIT_OK
    again = json.loads(capsys.readouterr().out)
    assert {k: again[k] for k in ("pair_count", "N_D4", "N_C4", "N_V4")} == \
        {k: full[k] for k in ("pair_count", "N_D4", "N_C4", "N_V4")}


def test_capacity_exit_code():
    r = run("census", "--bound", "2e7")
    assert r.returncode == EXIT_CAPACITY
    assert "capacity" in r.stderr


def test_domain_exit_code(capsys):
    assert main(["census", "--bound", "0"]) == EXIT_DOMAIN
    assert main(["fit", "--bounds", "1e3,1e4"]) == EXIT_DOMAIN


def test_io_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["census", "--bound", "500", "--out", str(blocker / "sub")]) == EXIT_IO


def test_bad_bound_is_usage_error():
    with pytest.raises(SystemExit):
        main(["census", "--bound", "12.5"])


def test_constant_json(capsys):
    assert main(["constant", "--truncation", "100", "--precision", "20"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert set(out) == {"midpoint", "radius", "tail_estimate", "terms_used"}
    assert abs(float(out["midpoint"]) - 0.0506714) < 1e-6
    assert float(out["radius"]) < 1e-10
    assert out["terms_used"] == 61


@pytest.mark.parametrize("suite", ["lemma", "identity"])
def test_verify_suites(suite, capsys):
    assert main(["verify", "--suite", suite, "--bound", "2000"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(line.startswith("PASS") for line in lines)


def test_verify_oracle_small(capsys):
    assert main(["verify", "--suite", "oracle", "--bound", "1000"]) == EXIT_OK
    assert "FAIL" not in capsys.readouterr().out


def test_fit_with_small_ladder(capsys):
    assert main(["fit", "--bounds", "1e3,3e3,1e4,3e4", "--truncation", "100"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["bounds"] == [1000, 3000, 10000, 30000]
    assert 0.03 < out["c_hat"] < 0.07


def test_module_entry_point():
    r = run("verify", "--suite", "lemma")
    assert r.returncode == 0 and r.stdout.count("PASS") == 4
