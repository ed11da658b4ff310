"""Command line driver: outputs, exit codes, JSON mode, determinism."""

from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

from gridhfk import Grid, parse_grid, serialize_grid, stabilize
from gridhfk.cli import main

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"

TREFOIL = str(FIX / "trefoil5.grid")
UNKNOT = str(FIX / "unknot2.grid")
TORUS34 = str(FIX / "torus34.grid")
GRANNY = str(FIX / "granny.grid")


def run(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# ------------------------------------------------------------- happy paths

def test_alexander_trefoil_exact_output(capsys):
    rc, out, err = run(capsys, ["alexander", TREFOIL])
    assert rc == 0
    assert out == "t - 1 + t^-1\n"
    assert err == ""


def test_genus_unknot_exact_output(capsys):
    rc, out, _ = run(capsys, ["genus", UNKNOT])
    assert rc == 0
    assert out == "0\n"


def test_check_invariance_example_output(capsys):
    rc, out, _ = run(capsys,
                     ["check", "invariance", TREFOIL,
                      "--moves", "3", "--seed", "7"])
    assert rc == 0
    assert out == "PASS: 4/4 HFK-hat tables identical\n"


def test_alexander_torus34(capsys):
    rc, out, _ = run(capsys, ["alexander", TORUS34])
    assert rc == 0
    assert out == "t^3 - t^2 + 1 - t^-2 + t^-3\n"


def test_homology_hat_table(capsys):
    rc, out, _ = run(capsys, ["homology", TREFOIL])
    assert rc == 0
    lines = out.splitlines()
    assert lines[0] == "hat homology over F2 of the 5x5 grid"
    assert lines[-1] == "total rank 3"
    assert len(lines) == 6  # header, column titles, three blocks, total


def test_homology_tilde_z(capsys):
    rc, out, _ = run(capsys,
                     ["homology", UNKNOT, "--version", "tilde",
                      "--coefficients", "z"])
    assert rc == 0
    assert "tilde homology over Z" in out
    assert "total rank 2" in out
    assert " Z" in out and "F2" not in out


def test_homology_minus_truncated_json(capsys):
    rc, out, _ = run(capsys,
                     ["homology", UNKNOT, "--version", "minus",
                      "--truncate", "3", "--json"])
    assert rc == 0
    data = json.loads(out)
    assert data["version"] == "minus"
    assert data["truncation"] == 3
    got = {(b["m"], b["a"]): b["free"] for b in data["blocks"]}
    for k in range(3):
        assert got[(-2 * k, -k)] == 1


def test_homology_json_payload(capsys):
    rc, out, _ = run(capsys, ["homology", TREFOIL, "--json"])
    data = json.loads(out)
    assert rc == 0
    assert data["command"] == "homology"
    assert data["coefficients"] == "F2"
    assert data["grid"] == {"n": 5, "x_cols": [0, 1, 2, 3, 4],
                            "o_cols": [2, 3, 4, 0, 1]}
    assert data["total_rank"] == 3
    assert sorted(b["a"] for b in data["blocks"]) == [-1, 0, 1]


def test_inline_grid_source(capsys):
    rc, out, _ = run(capsys, ["genus", "2;X=0 1;O=1 0"])
    assert rc == 0
    assert out == "0\n"


def test_json_grid_file(tmp_path, capsys):
    blob = {"n": 2, "x_cols": [0, 1], "o_cols": [1, 0]}
    path = tmp_path / "unknot.json"
    path.write_text(json.dumps(blob))
    rc, out, _ = run(capsys, ["genus", str(path)])
    assert rc == 0
    assert out == "0\n"


def test_alexander_f2_is_flagged(capsys):
    rc, out, _ = run(capsys,
                     ["alexander", TREFOIL, "--coefficients", "f2"])
    assert rc == 0
    assert out == "t + 1 + t^-1  (coefficients mod 2)\n"


def test_fibered_true_and_false(capsys):
    rc, out, _ = run(capsys, ["fibered", TREFOIL])
    assert (rc, out) == (0, "true\n")
    # twist knot with Alexander polynomial 2t - 3 + 2/t: top rank 2
    rc, out, _ = run(capsys, ["fibered", "7;X=0 1 2 3 4 6 5;O=2 4 6 5 0 3 1"])
    assert (rc, out) == (0, "false\n")


def test_check_signs_pass(capsys):
    rc, out, _ = run(capsys, ["check", "signs", TREFOIL])
    assert rc == 0
    assert out.startswith("PASS: sign assignment on the 5x5 grid")
    assert "d^2 = 0 over Z" in out


def test_check_signs_json(capsys):
    rc, out, _ = run(capsys, ["check", "signs", UNKNOT, "--json"])
    data = json.loads(out)
    assert rc == 0
    assert data["pass"] is True
    assert data["d_squared_zero"] is True
    assert data["variables"] > 0 and data["constraints"] > 0


def test_poset_stats_text(capsys):
    rc, out, _ = run(capsys, ["poset", "stats", TREFOIL])
    assert rc == 0
    assert "components 25 (singletons 22)" in out
    assert "all even" in out
    assert "0 failures" in out
    assert "A=-2: 46 elements, 1 components, sizes [46]" in out


def test_poset_stats_json(capsys):
    rc, out, _ = run(capsys, ["poset", "stats", TREFOIL, "--json"])
    data = json.loads(out)
    assert rc == 0
    assert data["components_total"] == 25
    assert data["singletons"] == 22
    assert data["parity"]["all_even"] is True
    assert data["tower"]["ok"] is True
    assert data["el"]["ok"] is True


def test_poset_stats_minus_mode(capsys):
    rc, out, _ = run(capsys,
                     ["poset", "stats", "3;X=0 1 2;O=1 2 0",
                      "--version", "minus", "--truncate", "2", "--json"])
    data = json.loads(out)
    assert rc == 0
    assert data["mode"] == "minus"
    assert data["truncation"] == 2
    assert data["parity"]["all_even"] is True


# ------------------------------------------------------------------ moves

def test_moves_stabilize_destabilize_roundtrip(capsys, tmp_path):
    rc, out, _ = run(capsys, ["moves", "stabilize", UNKNOT, "0", "a"])
    assert rc == 0
    stabilized = parse_grid(out)
    assert stabilized.n == 3
    path = tmp_path / "stab.grid"
    path.write_text(out)
    # the new 2x2 block sits in rows 0..1; find its collapsible corner
    rc, out2, _ = run(capsys, ["moves", "destabilize", str(path), "0", "0"])
    assert rc == 0
    assert parse_grid(out2).n == 2


def test_moves_commute_matches_library(capsys, tmp_path):
    g = stabilize(Grid(5, (0, 1, 2, 3, 4), (2, 3, 4, 0, 1)), 0, "a")
    path = tmp_path / "stab5.grid"
    path.write_text(serialize_grid(g))
    rc, out, _ = run(capsys, ["moves", "commute", str(path), "row", "5"])
    assert rc == 0
    from gridhfk import commute
    assert parse_grid(out) == commute(g, "row", 5)


def test_moves_json_grid_payload(capsys):
    rc, out, _ = run(capsys,
                     ["moves", "stabilize", UNKNOT, "0", "a", "--json"])
    data = json.loads(out)
    assert rc == 0
    assert data["move"] == ["stabilize", 0, "a"]
    assert data["grid"]["n"] == 3


# ------------------------------------------------------------- exit codes

def test_usage_errors_exit_1(capsys):
    for argv in (["bogus"],
                 ["homology"],
                 ["homology", UNKNOT, "--coefficients", "gf3"],
                 ["homology", UNKNOT, "--truncate", "3"],
                 ["poset", "stats", UNKNOT, "--version", "tilde"],
                 ["homology", UNKNOT, "--threads", "0"]):
        rc, out, err = run(capsys, argv)
        assert rc == 1, argv
        assert out == ""
        assert err.startswith("gridhfk: usage error:")


def test_usage_error_json_stderr(capsys):
    rc, _, err = run(capsys, ["homology", "--json"])
    assert rc == 1
    data = json.loads(err)
    assert data["error"]["exit"] == 1
    assert data["error"]["kind"] == "usage"


def test_validation_errors_exit_2(capsys):
    for argv in (["homology", "nosuch.grid"],
                 ["homology", "5;X=0 1 2 3;O=2 3 4 0 1"],
                 ["alexander", "2;X=0 1;O=0 1"],
                 ["fibered", TREFOIL, "--coefficients", "f2"],
                 ["moves", "commute", TREFOIL, "row", "0"],
                 ["moves", "destabilize", TREFOIL, "0", "0"]):
        rc, _, err = run(capsys, argv)
        assert rc == 2, argv
        assert err.startswith("gridhfk: validation error:")


def test_validation_error_json_stderr(capsys):
    rc, _, err = run(capsys,
                     ["moves", "commute", TREFOIL, "row", "0", "--json"])
    assert rc == 2
    data = json.loads(err)
    assert data["error"]["exit"] == 2
    assert data["error"]["kind"] == "validation"
    assert "interleave" in data["error"]["message"]


def test_resource_ceiling_exit_3(capsys):
    rc, _, err = run(capsys, ["homology", GRANNY, "--max-grid", "5", "--json"])
    assert rc == 3
    data = json.loads(err)
    assert data["error"]["exit"] == 3
    assert data["error"]["kind"] == "resource"


def test_bad_memory_env_is_usage_error(capsys, monkeypatch):
    monkeypatch.setenv("GRIDHFK_MAX_MEMORY_MB", "lots")
    rc, _, err = run(capsys, ["genus", UNKNOT])
    assert rc == 1
    assert "GRIDHFK_MAX_MEMORY_MB" in err


def test_help_exits_0(capsys):
    for argv in (["--help"], ["homology", "--help"], ["check", "--help"]):
        rc, out, _ = run(capsys, argv)
        assert rc == 0
        assert "usage" in out


# ---------------------------------------------------------- determinism

def test_identical_runs_are_byte_identical(capsys):
    outs = []
    for _ in range(2):
        rc, out, _ = run(capsys,
                         ["poset", "stats", TREFOIL, "--json", "--seed", "3"])
        assert rc == 0
        outs.append(out)
    assert outs[0] == outs[1]
    outs = []
    for _ in range(2):
        rc, out, _ = run(capsys,
                         ["check", "invariance", TREFOIL,
                          "--moves", "3", "--seed", "7", "--json"])
        assert rc == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_threads_do_not_change_output(capsys):
    rc1, out1, _ = run(capsys, ["homology", TREFOIL, "--threads", "1"])
    rc2, out2, _ = run(capsys, ["homology", TREFOIL, "--threads", "3"])
    assert (rc1, rc2) == (0, 0)
    assert out1 == out2


def test_invariance_json_records_moves(capsys):
    rc, out, _ = run(capsys,
                     ["check", "invariance", TREFOIL,
                      "--moves", "3", "--seed", "7", "--json"])
    data = json.loads(out)
    assert rc == 0
    assert data["pass"] is True
    assert data["tables"] == 4
    assert len(data["moves"]) == 3
    assert all(m[0] in ("commute", "stabilize", "destabilize")
               for m in data["moves"])


# ---------------------------------------------------------- entry point

def test_module_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "gridhfk.cli", "alexander", TREFOIL],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "t - 1 + t^-1\n"


def test_memory_ceiling_subprocess_exit_3():
    env = dict(os.environ, GRIDHFK_MAX_MEMORY_MB="200")
    proc = subprocess.run(
        [sys.executable, "-m", "gridhfk.cli", "fibered", GRANNY, "--json"],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 3
    data = json.loads(proc.stderr)
    assert data["error"]["kind"] == "resource"
