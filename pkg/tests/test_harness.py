import csv
import io

import numpy as np
import pytest

from codex_lcc import bounds
from codex_lcc.config import ConfigError, preset_config
from codex_lcc.harness import (CSV_COLUMNS, build_code, comparison_table, effective_epsilon, independence_audit,
                               realized_delta, run_repetition_baseline, run_trials, setup_for, stats_csv,
                               wilson_interval, within_bound)


def _strip_timing(st):
    row = st.row()
    row.pop("wall_ms")
    return row


def test_same_seed_same_row():
    cfg = preset_config("gf7").replace(seed=11, trials=600, delta=0.1)
    assert _strip_timing(run_trials(cfg)) == _strip_timing(run_trials(cfg))


def test_rows_independent_of_worker_count():
    cfg = preset_config("gf7").replace(seed=5, trials=5000, delta=0.1)
    assert _strip_timing(run_trials(cfg, workers=1)) == _strip_timing(run_trials(cfg, workers=3))


def test_different_seed_changes_outcome():
    a = run_trials(preset_config("herm3-alg1").replace(seed=1, trials=3000, delta=0.1))
    b = run_trials(preset_config("herm3-alg1").replace(seed=2, trials=3000, delta=0.1))
    assert a.failures != b.failures or a.fail_outputs != b.fail_outputs


@pytest.mark.parametrize("name", ["gf5-t1", "gf7", "herm3-alg1", "thm4.5i"])
def test_zero_delta_never_fails(name):
    st = run_trials(preset_config(name).replace(seed=3, trials=300, delta=0.0))
    assert st.failures == 0 and st.eps_effective == 0.0


def test_missing_seed_rejected():
    with pytest.raises(ConfigError):
        run_trials(preset_config("gf7"))


def test_conditional_correctness_holds():
    st = run_trials(preset_config("herm3-alg1").replace(seed=4, trials=2000, delta=0.08))
    assert st.conditional_violations == 0
    assert st.fail_outputs + st.wrong_outputs == st.failures


def test_queries_per_trial():
    assert run_trials(preset_config("herm3-alg1").replace(seed=1, trials=10, delta=0)).queries_per_trial == 26
    assert run_trials(preset_config("herm4-alg2").replace(seed=1, trials=10, delta=0)).queries_per_trial == 252


def test_baseline_query_count_and_parity():
    cfg = preset_config("baseline-ex4.1ii").replace(seed=1, trials=20, delta=0.0)
    st = run_repetition_baseline(cfg)
    assert st.queries_per_trial == cfg.k * (cfg.q - 1) * cfg.s
    assert st.failures == 0
    with pytest.raises(ConfigError):
        run_repetition_baseline(cfg.replace(s=2))


def test_realized_delta_small_domain():
    cfg = preset_config("gf5-t1").replace(seed=0, delta=0.2)
    o = setup_for(cfg).oracle
    pts = np.array([[a, b] for a in range(5) for b in range(5)])
    assert realized_delta(o) == o.corrupted(pts).mean()


def test_effective_epsilon_uses_decoder_radius():
    cfg = preset_config("ex4.1ii").replace(seed=0)
    s = setup_for(cfg)
    assert effective_epsilon(cfg, s) == bounds.eps_alg1_effective(0.05, 255, 2, s.radius)
    assert effective_epsilon(cfg.replace(error_model="exact", m=3), None) is None


def test_wilson_and_bound_check():
    lo, hi = wilson_interval(3, 1000)
    assert lo < 0.003 < hi
    assert within_bound(0, 100000, 0.0)
    assert within_bound(30, 10000, 0.002)  # lower limit below eps
    assert not within_bound(300, 10000, 0.002)


def test_csv_columns_and_timing_flag():
    st = run_trials(preset_config("gf7").replace(seed=2, trials=50))
    rows = list(csv.DictReader(io.StringIO(stats_csv([st]))))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert "wall_ms" not in stats_csv([st], include_timing=False).splitlines()[0]
    assert stats_csv([st], include_timing=False) == stats_csv([st], include_timing=False)


def test_audit_exact_small_preset():
    rep = independence_audit(build_code(preset_config("gf5-t2")))
    assert rep["mode"] == "exact" and rep["passed"]


def test_audit_biased_control_fails():
    assert not independence_audit(build_code(preset_config("gf5-t2")), biased=True)["passed"]
    assert not independence_audit(build_code(preset_config("gf7")), samples=20000, biased=True, exact=False)["passed"]


def test_audit_sampled_interleaved():
    rep = independence_audit(build_code(preset_config("herm4-alg2")), samples=20000)
    assert rep["mode"] == "chi2" and rep["passed"]


def test_comparison_rows():
    rows = comparison_table()
    assert [r["preset"] for r in rows] == ["thm2", "thm4.5ii"]
    assert all(r["ratio"] < 1 for r in rows)
    assert rows[1]["queries_alg"] == 200 and rows[1]["s"] % 2 == 1
