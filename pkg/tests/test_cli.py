import json

import pytest

from dsmap.cli import run
from dsmap.config import CliConfig, load_config, parse_config
from dsmap.errors import InvalidArgument


def test_orbit(capsys):
    assert run(["orbit", "--p", "1", "--q", "3", "--a", "0", "--b", "1", "--r", "1", "--j", "0"]) == 0
    assert "period=3 winding=1 class=escaping" in capsys.readouterr().out


def test_orbit_exact(capsys):
    assert run(["orbit", "--q", "7", "--r", "2", "--j", "5", "--exact"]) == 0
    assert "agrees=yes" in capsys.readouterr().out


def test_ell_single(capsys):
    assert run(["ell", "--q", "991"]) == 0
    assert capsys.readouterr().out.startswith("991,414639,0.4222")


def test_ell_range(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert run(["ell", "--q-from", "3", "--q-to", "9", "--out", str(out)]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "3,3,0.33333333333333331", "5,9,0.35999999999999999", "7,23,0.46938775510204084", "9,33,0.40740740740740738"]
    assert out.read_text().startswith("q,ell,ratio\n")


def test_ell_usage_errors():
    assert run(["ell"]) == 2
    assert run(["ell", "--q", "3", "--q-from", "3"]) == 2
    assert run(["ell", "--q", "4"]) == 2


def test_verify_period4(tmp_path):
    out = tmp_path / "v.json"
    assert run(["verify", "--suite", "period4", "--k-max", "25", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["passed"] is True


def test_verify_failure_exit_code(capsys):
    # the window bound fails at q = 5 (see theory tests)
    assert run(["verify", "--suite", "window", "--q-max", "5"]) == 1
    assert "passed=false" in capsys.readouterr().out


def test_search(capsys):
    assert run(["search", "--k", "1", "--b-max", "5"]) == 0
    assert capsys.readouterr().out.strip() == "k=1 b=3 a=1"
    assert run(["search", "--k", "1", "--b-max", "2"]) == 0
    assert "not-found" in capsys.readouterr().out


def test_decompose_and_budget(tmp_path, capsys):
    out = tmp_path / "d.csv"
    assert run(["decompose", "--q", "3", "--out", str(out)]) == 0
    assert "orbits=3 escaping=1 max_period=4" in capsys.readouterr().out
    assert run(["--memory-budget-states", "1000000", "decompose", "--q", "2000"]) == 3


def test_render_and_young(tmp_path):
    a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
    assert run(["render", "--q", "31", "--mode", "escape", "--out", str(a)]) == 0
    assert run(["--threads", "3", "render", "--q", "31", "--mode", "escape", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    y = tmp_path / "y.csv"
    assert run(["young", "--q", "3", "--bounded-only", "--out", str(y)]) == 0
    assert y.read_text().splitlines()[1:] == ["3,0,4,3", "3,1,2,3"]


def test_output_dir(tmp_path):
    assert run(["--output-dir", str(tmp_path), "young", "--q", "5", "--out", "y.csv"]) == 0
    assert (tmp_path / "y.csv").exists()


def test_invalid_params_exit_2(capsys):
    assert run(["orbit", "--p", "2", "--q", "4", "--r", "0", "--j", "0"]) == 2
    assert "lowest terms" in capsys.readouterr().err


def test_bad_subcommand():
    assert run(["nope"]) == 2
    assert run(["verify", "--suite", "nonsense"]) == 2


@pytest.mark.parametrize("cmd", ["orbit", "decompose", "ell", "search", "verify", "render", "young"])
def test_help(cmd, capsys):
    assert run([cmd, "--help"]) == 0
    assert len(capsys.readouterr().out) > 200


def test_config_file(tmp_path):
    cfg = tmp_path / "dsm.conf"
    cfg.write_text("# budgets\nmemory_budget_states = 5000000\nthreads=2\noutput_dir=out\n")
    c = load_config({"DSM_CONFIG": str(cfg)})
    assert c == CliConfig(5_000_000, tmp_path.__class__("out"), 2)
    assert c.override({"threads": 1, "output_dir": None}).threads == 1
    assert load_config({}) == CliConfig()


@pytest.mark.parametrize("text", ["threads=-1", "memory_budget_states=10", "colour=blue", "threads"])
def test_config_rejects(text):
    with pytest.raises(InvalidArgument):
        parse_config(text)


def test_config_env_used_by_cli(tmp_path, monkeypatch):
    cfg = tmp_path / "dsm.conf"
    cfg.write_text("memory_budget_states=1000000\n")
    monkeypatch.setenv("DSM_CONFIG", str(cfg))
    assert run(["decompose", "--q", "2000"]) == 3
    assert run(["--memory-budget-states", "5000000", "decompose", "--q", "2000"]) == 0
