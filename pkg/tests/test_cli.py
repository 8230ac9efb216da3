import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from lambdag.cli import run
from lambdag.givental import random_symplectic


def cli(*args, env=None):
    full = dict(os.environ)
    full.pop("LAMBDAG_CACHE", None)
    full.update(env or {})
    p = subprocess.run([sys.executable, "-m", "lambdag.cli", *args], capture_output=True, text=True, env=full)
    return p.returncode, p.stdout, p.stderr


def test_scalar_commands(capsys):
    assert run(["psi", "1", "1"]) == 0
    assert run(["psi", "0", "0,0,0"]) == 0
    assert run(["bg", "2"]) == 0
    assert run(["hodge", "2", "2"]) == 0
    assert run(["dr", "1", "2,-2", "--", "1,0"]) == 0
    assert capsys.readouterr().out.split() == ["1/24", "1", "7/5760", "7/5760", "1/8"]


def test_graphs_output(capsys):
    assert run(["graphs", "1", "1"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 2
    assert run(["graphs", "0", "5", "--format", "json"]) == 0
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert len(rows) == 1 + 10 + 15
    assert all(set(r) == {"graph", "aut"} for r in rows)


def test_exit_codes(capsys):
    assert run(["psi", "0", "0,0"]) == 2          # unstable
    assert run(["verify", "theta0", "--target", "P3"]) == 2
    assert run(["nonsense"]) == 2
    assert run(["dr", "1", "2,-1", "--", "0"]) == 2  # A does not sum to zero
    capsys.readouterr()


def test_bad_cache_is_exit_one(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("TAUTCACHE v1\nPSI;1;garbage\n")
    code, _, err = cli("--cache", str(path), "psi", "1", "1")
    assert code == 1 and "error" in err


SCHEMA = {"check", "target", "indices", "residual", "nontrivial_terms", "status"}


def test_verify_json_schema():
    code, out, err = cli("verify", "theta-point", "--g", "1", "--n-range=-1..1", "--m-range", "0..1",
                         "--deriv-order", "2", "--format", "json")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert rows and all(SCHEMA <= set(r) for r in rows)
    assert all(r["status"] == "ok" and Fraction(r["residual"]) == 0 for r in rows)
    assert err.strip().endswith("0 failed")


def test_theta1_records_carry_ratio():
    code, out, _ = cli("verify", "theta1", "--target", "P1", "--n-range", "0..1", "--m-range", "0",
                       "--deriv-order", "1", "--q-max", "1", "--format", "json")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert rows and all(r["ratio_ok"] for r in rows)


def test_thread_count_does_not_change_output():
    args = ["verify", "theta0", "--target", "P1", "--n-range=-1..1", "--m-range", "0..1",
            "--deriv-order", "2", "--q-max", "1"]
    one = cli(*args, "--threads", "1")
    four = cli(*args, "--threads", "4")
    assert one[0] == four[0] == 0
    assert one[1] == four[1]


def test_givental_command(tmp_path):
    path = tmp_path / "R.json"
    path.write_text(json.dumps(random_symplectic(2, 4, seed=1).to_json()))
    code, out, _ = cli("givental", "--data", str(path), "--g", "1", "--n", "1")
    assert code == 0 and out.split()[0] == "1/12"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rank": 1, "delta": ["1"], "R": [[["1"]], [["1"]]]}))
    code, _, err = cli("givental", "--data", str(bad), "--g", "0", "--n", "3")
    assert code == 1 and "symplectic" in err


def test_cache_round_trip(tmp_path):
    path = tmp_path / "cache.txt"
    assert cli("--cache", str(path), "hodge", "2", "2")[0] == 0
    code, out, _ = cli("cache", "stats", "--cache", str(path), "--format", "json")
    stats = json.loads(out)
    assert code == 0 and stats["kinds"]["HODGE"] == 1
    assert cli("cache", "verify", "--cache", str(path))[0] == 0

    text = path.read_text().replace("HODGE;2;2;7/5760", "HODGE;2;2;7/5761")
    path.write_text(text)
    code, out, _ = cli("cache", "verify", "--cache", str(path))
    assert code == 1 and "lambda-theorem" in out
    code, out, _ = cli("cache", "gc", "--cache", str(path))
    assert code == 0
    assert "HODGE" not in path.read_text()
    assert cli("cache", "verify", "--cache", str(path))[0] == 0


def test_env_var_and_flag_override(tmp_path):
    env_path, flag_path = tmp_path / "env.txt", tmp_path / "flag.txt"
    env = {"LAMBDAG_CACHE": str(env_path)}
    assert cli("psi", "1", "1", env=env)[0] == 0
    assert env_path.exists()
    assert cli("--cache", str(flag_path), "psi", "0", "0,0,0", env=env)[0] == 0
    assert flag_path.exists()
    assert "PSI;0;0,0,0" not in env_path.read_text()


def test_cache_needs_a_path():
    assert cli("cache", "stats")[0] == 2
