import json
import subprocess
import sys

import pytest

from codex_lcc.cli import main
from codex_lcc.config import config_from_dict


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds_formula_json(capsys):
    code, out, _ = run(capsys, "bounds", "--formula", "eps_curve", "--delta", "0.05", "--sigma", "0.2", "--q", "256")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(0.19 / 0.25 / 255, rel=1e-12)


def test_bounds_missing_input_is_config_error(capsys):
    code, _, err = run(capsys, "bounds", "--formula", "eps_curve", "--delta", "0.05")
    assert code == 1 and "--sigma" in err


def test_bounds_regime_violation(capsys):
    code, _, err = run(capsys, "bounds", "--formula", "eps_line", "--delta", "0.3", "--sigma", "0.5")
    assert code == 1 and "violated" in err


def test_bounds_theorem_and_comparison(capsys):
    code, out, _ = run(capsys, "bounds", "--theorem", "thm4.5(ii)", "--d", "5")
    body = json.loads(out)
    assert code == 0 and any(not c["holds"] and c["inequality"] == "d < sigma n/(k+2)" for c in body["constraints"])
    code, out, _ = run(capsys, "bounds", "--comparison")
    assert code == 0 and all(r["ratio"] < 1 for r in json.loads(out)["rows"])


def test_presets_dump_round_trip(capsys):
    code, out, _ = run(capsys, "presets", "--dump")
    assert code == 0
    for name, data in json.loads(out).items():
        cfg = config_from_dict(data)
        assert cfg.preset == name


def test_unknown_preset_lists_valid(capsys):
    code, _, err = run(capsys, "simulate", "--preset", "nope", "--seed", "1")
    assert code == 1 and "gf7" in err and "herm4-alg2" in err


def test_simulate_needs_seed(capsys):
    code, _, err = run(capsys, "simulate", "--preset", "gf7")
    assert code == 1 and "seed" in err


def test_config_error_names_inequality(tmp_path, capsys):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"preset": "thm4.5ii", "d": 5, "seed": 1}))
    code, _, err = run(capsys, "simulate", "--config", str(p))
    assert code == 1 and "d < sigma n/(k+2) violated" in err


def test_bad_json_and_extra_key(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "simulate", "--config", str(p), "--seed", "1")[0] == 1
    p.write_text(json.dumps({"preset": "gf7", "colour": "red"}))
    code, _, err = run(capsys, "simulate", "--config", str(p), "--seed", "1")
    assert code == 1 and "colour" in err


def test_simulate_writes_stable_csv(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run(capsys, "simulate", "--preset", "gf7", "--seed", "9", "--trials", "200", "--no-timing",
                   "--out", str(out))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0].startswith("preset,scheme,q")


def test_decode_transcript(capsys):
    code, out, _ = run(capsys, "decode", "--preset", "herm4-alg2", "--seed", "3", "--delta", "0",
                       "--targets", "1,2,3,0")
    body = json.loads(out)
    assert code == 0 and body["correct"] and body["queries"] == 252


def test_decode_bad_targets(capsys):
    code, _, err = run(capsys, "decode", "--preset", "gf7", "--seed", "3", "--targets", "1,2,3")
    assert code == 1 and "target" in err


def test_codex_build_and_audit(capsys):
    code, out, _ = run(capsys, "codex-build", "--curve", "rational", "--q", "7", "--k", "1", "--t", "1",
                       "--d", "2", "--r", "3")
    assert code == 0 and json.loads(out)
    code, out, _ = run(capsys, "codex-audit", "--preset", "herm3-alg1", "--samples", "20")
    assert code == 0 and json.loads(out)["passed"]


def test_codex_build_bad_parameters(capsys):
    code, _, _ = run(capsys, "codex-build", "--curve", "rational", "--q", "7", "--k", "1", "--t", "1",
                     "--d", "2", "--r", "2")
    assert code == 1


def test_unknown_flag_is_config_error(capsys):
    assert run(capsys, "simulate", "--bogus")[0] == 1


def test_console_script_entry():
    res = subprocess.run([sys.executable, "-m", "codex_lcc.cli", "presets"], capture_output=True, text=True)
    assert res.returncode == 0 and "herm4-alg2" in res.stdout and "thm2" in res.stdout
