"""Command-line interface: payload shape, formats, exit codes, determinism."""

import csv
import io
import json
import os
import subprocess
import sys

BASE = [sys.executable, "-m", "ps_lab.cli"]


def run(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(BASE + list(args), capture_output=True, text=True, env=env)


def test_json_payload_shape():
    r = run("kmod", "--k", "2")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["K"] == 24
    assert doc["tool_version"]
    assert doc["run_config"]["subcommand"] == "kmod"
    assert doc["run_config"]["parameters"]["k"] == 2
    # timing goes to stderr only, keeping stdout reproducible
    assert "wall_time_ms" not in r.stdout
    assert "wall_time_ms=" in r.stderr


def test_exact_rational_fields_are_strings():
    doc = json.loads(run("c-range", "--k", "3", "--s", "9", "--t", "4").stdout)
    assert doc["c_max"] == "1 + 3/1331"
    assert doc["c_max_exact"] == "1334/1331"
    assert isinstance(doc["c_max_decimal"], float)


def test_counts_are_strings():
    doc = json.loads(run("moment-count", "--t", "2", "--k", "3", "--X", "12").stdout)
    assert doc["count"] == "284"
    doc = json.loads(run("rep-count", "--N", "133", "--s", "2", "--k", "3", "--c", "1.5").stdout)
    assert doc["count"] == "2"


def test_value_matches_library():
    from ps_lab.expsums import weyl_sum
    from fractions import Fraction

    doc = json.loads(run("weyl-sum", "--alpha", "1/3", "--k", "2", "--X", "3").stdout)
    want = weyl_sum(Fraction(1, 3), 2, 3)
    assert abs(doc["value"]["re"] - want.real) < 1e-15
    assert abs(doc["value"]["im"] - want.imag) < 1e-15


def test_csv_format_is_rfc4180():
    raw = subprocess.run(
        BASE + ["major-arcs", "--X", "100", "--k", "3", "--kappa", "1", "--format", "csv"],
        capture_output=True,
    )
    assert raw.returncode == 0
    assert b"\r\n" in raw.stdout  # RFC-4180 line endings, pre-translation
    rows = list(csv.reader(io.StringIO(raw.stdout.decode())))
    assert rows[0] == ["a", "q", "center", "halfwidth"]
    assert len(rows) == 1 + 6  # header + sum of totients up to q_max=4
    assert rows[1][2] == "1/4"


def test_csv_scalar_fallback():
    rows = list(csv.reader(io.StringIO(run("kmod", "--k", "3", "--format", "csv").stdout)))
    assert rows[0] == ["key", "value"]
    assert ["K", "2"] in rows


def test_output_file_option(tmp_path):
    target = tmp_path / "out.json"
    r = run("two-t", "--k", "5", "--output", str(target))
    assert r.returncode == 0
    assert r.stdout == ""
    assert json.loads(target.read_text())["two_t"] == 24


def test_validation_exit_code():
    assert run("ps-member", "--c", "2.5", "--n", "10").returncode == 2
    assert run("weyl-sum", "--alpha", "zzz", "--k", "3", "--X", "5").returncode == 2
    assert run("no-such-command").returncode == 2
    assert run("osc-j", "--z", "0", "--N", "5", "--k", "3", "--delta", "0.9").returncode == 2


def test_budget_exit_code():
    r = run("rep-count", "--N", "5000000", "--s", "13", "--k", "3", "--c", "1.5")
    assert r.returncode == 3
    r = run("moment-count", "--t", "5", "--k", "3", "--X", "10")
    assert r.returncode == 3


def test_precision_cap_env():
    ok = run("ps-member", "--c", "1.5", "--n", "11", env_extra={"PS_LAB_MAX_PRECISION_BITS": "8192"})
    assert ok.returncode == 0
    # cap below the base working precision is a configuration error
    bad = run("ps-member", "--c", "1.5", "--n", "11", env_extra={"PS_LAB_MAX_PRECISION_BITS": "64"})
    assert bad.returncode == 2


def test_threads_do_not_change_members():
    a = json.loads(run("ps-list", "--c", "1.5", "--limit", "2000", "--threads", "1").stdout)
    b = json.loads(run("ps-list", "--c", "1.5", "--limit", "2000", "--threads", "4").stdout)
    assert a["members"] == b["members"]


def test_double_run_byte_identical():
    cases = [
        ["singular-series", "--m", "101", "--s", "9", "--k", "3", "--Q", "30"],
        ["bound-experiment", "--lemma", "typeII", "--grid", "N=3000", "--seed", "7"],
        ["vaaler-check", "--H", "8", "--grid-points", "20000"],
    ]
    for case in cases:
        first = run(*case)
        second = run(*case)
        assert first.returncode == 0, case
        assert first.stdout == second.stdout, case
