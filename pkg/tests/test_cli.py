import json
import subprocess
import sys
import time

import pytest

from surropt.cli import (
    SUMMARY_FIELDS,
    DEFAULTS,
    build_matrix,
    derive_seed,
    main,
    read_summary_csv,
    write_summary_csv,
)

SMALL = ["--function", "levy", "--dim", "3", "--fiv", "1", "--budget", "25", "--pool-size", "100",
         "--executions", "2", "--seed", "5"]


def test_list_functions(capsys):
    assert main(["--list-functions"]) == 0
    assert capsys.readouterr().out.split() == ["rosenbrock", "rastrigin", "levy", "ackley", "zakharov"]


def test_default_matrix_covers_the_replication_levels():
    cells = build_matrix(dict(DEFAULTS))
    assert len(cells) == 5 * 4 * 5 * 5
    levels = sorted({(c.replication, c.r) for c in cells})
    assert levels == [("fixed", 5), ("fixed", 10), ("none", 0), ("smart", 5), ("smart", 10)]
    assert {c.d for c in cells} == {30} and {c.fiv for c in cells} == {0.5}
    assert {c.noise for c in cells} == {0.0, 0.05, 0.1, 0.25}


def test_seeds_depend_on_every_coordinate():
    seeds = {derive_seed(m, c, e) for m in (0, 1) for c in (0, 1) for e in (0, 1)}
    assert len(seeds) == 8
    assert derive_seed(3, 4, 5) == derive_seed(3, 4, 5)


def test_run_writes_traces_and_summary(tmp_path, capsys):
    out = tmp_path / "res"
    rc = main(SMALL + ["--surrogate", "tkmars,rbf", "--replication", "none,smart", "--rmax", "3",
                       "--noise", "0.1", "--out", str(out)])
    assert rc == 0
    rows = read_summary_csv(out / "summary.csv")
    assert len(rows) == 2 * 2 * 2
    assert all(r["status"] == "ok" and r["total_evals"] == 25 for r in rows)
    traces = sorted((out / "traces").glob("*.csv"))
    assert len(traces) == 8
    lines = traces[0].read_text().splitlines()
    assert lines[0] == "run_id,eval_index,bsms_true,bsms_mean"
    assert len(lines) == 26
    table = capsys.readouterr().out
    assert "levy d=3 fiv=1.0 np=0.1 tkmars smart(3)" in table
    tk = [r for r in rows if r["surrogate"] == "tkmars"]
    assert all(r["selected_variables"] == "" or set(r["selected_variables"].split(";")) <= {"0", "1", "2"}
               for r in tk)


def test_summary_round_trip(tmp_path):
    row = {"function": "levy", "d": 3, "fiv": 0.1, "noise": 0.05, "surrogate": "tkmars",
           "replication": "smart", "r_or_rmax": 5, "seed": 123, "auc": 0.1 + 0.2, "mtfauc": 1 / 3,
           "final_bsms_true": 2.0**-40, "total_evals": 50, "selected_variables": "0;2", "status": "ok"}
    write_summary_csv(tmp_path / "s.csv", [row])
    assert read_summary_csv(tmp_path / "s.csv") == [{k: row[k] for k in SUMMARY_FIELDS}]
    write_summary_csv(tmp_path / "empty.csv", [])
    assert (tmp_path / "empty.csv").read_text().strip() == ",".join(SUMMARY_FIELDS)


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"function": "ackley", "dim": "2", "budget": 8, "executions": 1,
                               "surrogate": "rbf", "replication": "none", "noise": "0", "seed": 1}))
    out = tmp_path / "o"
    assert main(["--config", str(cfg), "--budget", "10", "--out", str(out)]) == 0
    rows = read_summary_csv(out / "summary.csv")
    assert len(rows) == 1 and rows[0]["function"] == "ackley" and rows[0]["total_evals"] == 10


@pytest.mark.parametrize("argv", [
    ["--surrogate", "svm"],
    ["--replication", "often"],
    ["--function", "sphere"],
    ["--noise", "1.5"],
    ["--dim", "x"],
    ["--rmax", "0", "--replication", "smart"],
    ["--executions", "0"],
    ["--config", "/nonexistent/file.json"],
])
def test_config_errors_exit_with_one(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path)]) == 1
    assert "error" in capsys.readouterr().err


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"budgett": 5}))
    assert main(["--config", str(cfg), "--out", str(tmp_path)]) == 1


def test_failed_runs_exit_with_two(tmp_path, monkeypatch):
    import surropt.cli as cli

    def explode(config):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "run", explode)
    out = tmp_path / "o"
    assert main(SMALL + ["--surrogate", "rbf", "--replication", "none", "--noise", "0",
                         "--out", str(out)]) == 2
    rows = read_summary_csv(out / "summary.csv")
    assert all(r["status"].startswith("error: RuntimeError") for r in rows)


def test_jobs_default_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("SURROPT_JOBS", "nope")
    assert main(SMALL + ["--out", str(tmp_path)]) == 1


def test_serial_and_parallel_outputs_match(tmp_path):
    args = SMALL + ["--surrogate", "tkmars,gp", "--replication", "smart", "--rmax", "3", "--noise", "0.1"]
    assert main(args + ["--jobs", "1", "--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--jobs", "2", "--out", str(tmp_path / "b")]) == 0
    for name in ["summary.csv"] + [f"traces/c000{c}_e00{e}.csv" for c in (0, 1) for e in (0, 1)]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_smoke_run_is_fast(tmp_path):
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "surropt", "--function", "rastrigin", "--dim", "30", "--fiv", "0.5",
         "--noise", "0.1", "--surrogate", "tkmars", "--replication", "smart", "--rmax", "10",
         "--budget", "50", "--executions", "1", "--seed", "42", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert time.perf_counter() - start < 10
    assert (tmp_path / "summary.csv").exists()
