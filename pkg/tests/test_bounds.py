import json
import math
from pathlib import Path

import pytest
from hypothesis import assume, given, settings, strategies as st

from codex_lcc import bounds
from codex_lcc.bounds import BoundError

GOLDEN = json.loads((Path(__file__).parent / "golden" / "bounds.json").read_text())
rates = st.floats(0, 0.45, allow_nan=False)


# hand substitutions, written before the implementation was consulted
@pytest.mark.parametrize("value,expected", [
    (lambda: bounds.chebyshev_tail(0.1, 100, 20), 9 / 400),
    (lambda: bounds.twise_tail(4, 10, 30), 8 * (56 / 900) ** 2),
    (lambda: bounds.eps_line(0.1, 0.5), 0.4),
    (lambda: bounds.eps_curve(0.05, 0.2, 256), 0.19 / 0.25 / 255),
    (lambda: bounds.eps_repetition(0.5, 2), 0.75),
    (lambda: bounds.eps_repetition(0.1, 3), 3 * 0.01 * 0.9 + 0.001),
    (lambda: bounds.queries_repetition(256, 8, 3), 6144),
])
def test_hand_values(value, expected):
    assert value() == pytest.approx(expected, rel=1e-12, abs=0)


def test_trivial_edges():
    assert bounds.chebyshev_tail(0, 50, 3) == 0
    assert bounds.chebyshev_tail(0.5, 100, 5) == 1
    assert bounds.eps_line(0, 0.3) == 0
    assert bounds.eps_curve(0, 0.2, 256) == 0
    assert bounds.twise_tail(4, 0, 7) == pytest.approx(8 * (16 / 49) ** 2, rel=1e-12)
    assert bounds.eps_tcurve(0, 0.2, 256, 4) == pytest.approx(8 * (64 / (0.64 * 255 ** 2)) ** 2, rel=1e-12)
    assert bounds.eps_alg2(0, 0.1, 0.2, 4, 63, 4) == pytest.approx(8 * 4 * (64 / (0.49 * 63 ** 2)) ** 2, rel=1e-12)


@pytest.mark.parametrize("call", [
    lambda: bounds.chebyshev_tail(0.1, 10, 0),
    lambda: bounds.twise_tail(3, 1, 1),
    lambda: bounds.twise_tail(2, 1, 1),
    lambda: bounds.twise_tail(4, 1, -1),
    lambda: bounds.eps_line(0.3, 0.5),
    lambda: bounds.eps_curve(0.3, 0.2, 256),
    lambda: bounds.eps_tcurve(0.05, 0.2, 256, 5),
    lambda: bounds.eps_tcurve(0.45, 0.2, 256, 4),
    lambda: bounds.eps_alg2(0.3, 0.3, 0.3, 4, 63, 4),
    lambda: bounds.eps_repetition(1.5, 3),
    lambda: bounds.theorem_presets("thm9"),
])
def test_regime_errors(call):
    with pytest.raises(BoundError):
        call()


def test_eps_curve_is_chebyshev_at_the_half_gap():
    d, s, q = 0.05, 0.2, 256
    A = (1 - 2 * s) * (q - 1) / 2 - d * (q - 1)
    assert bounds.eps_curve(d, s, q) == pytest.approx(bounds.chebyshev_tail(d, q - 1, A), rel=1e-12)


def test_eps_tcurve_is_twise_composition():
    d, s, q = 0.05, 0.2, 256
    A = (1 - s) * (q - 1) / 2 - d * (q - 1)
    assert bounds.eps_tcurve(d, s, q, 4) == pytest.approx(bounds.twise_tail(4, d * (q - 1), A), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(d=rates, s=st.floats(0, 0.9), q=st.integers(3, 2 ** 16), t=st.sampled_from([4, 6, 8, 10]))
def test_tcurve_below_cap(d, s, q, t):
    assume(d < (1 - s) / 2 - 1e-9)
    assert bounds.eps_tcurve(d, s, q, t) <= bounds.tcurve_cap(d, s, q, t) * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(d=rates, n=st.integers(1, 10 ** 6), A1=st.floats(0.01, 1e4), A2=st.floats(0.01, 1e4))
def test_chebyshev_monotone_in_A(d, n, A1, A2):
    lo, hi = sorted((A1, A2))
    assert bounds.chebyshev_tail(d, n, hi) <= bounds.chebyshev_tail(d, n, lo)


@settings(max_examples=100, deadline=None)
@given(t=st.sampled_from([4, 6, 8]), mu=st.floats(0, 1e3), A1=st.floats(0.01, 1e4), A2=st.floats(0.01, 1e4))
def test_twise_monotone_in_A(t, mu, A1, A2):
    lo, hi = sorted((A1, A2))
    assert bounds.twise_tail(t, mu, hi) <= bounds.twise_tail(t, mu, lo)


@settings(max_examples=100, deadline=None)
@given(d1=st.floats(0, 0.2), d2=st.floats(0, 0.2), n=st.integers(10, 5000))
def test_eps_alg2_monotone_in_delta(d1, d2, n):
    lo, hi = sorted((d1, d2))
    assert bounds.eps_alg2(lo, 0.1, 0.2, 4, n, 4) <= bounds.eps_alg2(hi, 0.1, 0.2, 4, n, 4)


@settings(max_examples=100, deadline=None)
@given(b=st.floats(0, 1), s=st.integers(1, 60))
def test_repetition_clamped_and_log_consistent(b, s):
    e = bounds.eps_repetition(b, s)
    assert 0 <= e <= 1
    if 1e-300 < e < 1:
        assert math.log(e) == pytest.approx(bounds.log_eps_repetition(b, s), rel=1e-9, abs=1e-9)


def test_repetition_single_round_is_b():
    for b in (0, 0.01, 0.3, 1):
        assert bounds.eps_repetition(b, 1) == b


def test_minimal_odd_s_is_minimal():
    b, target = 0.05, math.log(1e-6)
    s = bounds.minimal_odd_s(b, target)
    assert s % 2 == 1
    assert bounds.log_eps_repetition(b, s) <= target
    assert bounds.log_eps_repetition(b, s - 2) > target
    assert bounds.minimal_odd_s(0.6, target) is None


def test_effective_alg1_branches():
    assert bounds.eps_alg1_effective(0.05, 255, 1, 126) == pytest.approx(0.05 * 255 / 127, rel=1e-12)
    assert bounds.eps_alg1_effective(0.05, 255, 2, 76) == pytest.approx(
        bounds.chebyshev_tail(0.05, 255, 77 - 0.05 * 255), rel=1e-12)
    assert bounds.eps_alg1_effective(0.05, 255, 5, 100) == pytest.approx(
        bounds.twise_tail(4, 0.05 * 255, 101 - 0.05 * 255), rel=1e-12)
    assert bounds.eps_alg1_effective(0.5, 10, 2, 2) == 1.0


def test_eps_alg2_radius_override():
    # A = 40/4 - 0.05*63 = 6.85
    assert bounds.eps_alg2(0.05, 0, 0, 4, 63, 4, radius_override=40) == pytest.approx(
        min(1, 8 * 4 * ((4 * 0.05 * 63 + 16) / 6.85 ** 2) ** 2), rel=1e-12)
    assert bounds.eps_alg2(0.05, 0, 0, 4, 63, 4, radius_override=18) == 1.0


def test_golden_eps_alg2():
    assert bounds.eps_alg2(0.05, 0.125, 0.125, 4, 63, 4) == pytest.approx(GOLDEN["eps_alg2_herm4"], rel=1e-12)
    assert bounds.eps_alg2(0.05, 0, 0, 4, 63, 4, radius_override=18) == GOLDEN["eps_alg2_herm4_radius18"]


@pytest.mark.parametrize("name", bounds.preset_names())
def test_theorem_presets_locked(name):
    pr = bounds.theorem_presets(name)
    g = GOLDEN["theorem_presets"][name]
    assert pr.queries == g["queries"]
    assert pr.violated == g["violated"]
    for got, want in ((pr.eps_nominal, g["eps_nominal"]), (bounds.log_eps_nominal(pr), g["log_eps"])):
        if want is None:
            assert got is None
        else:
            assert got == pytest.approx(want, rel=1e-12, abs=0)


def test_theorem_preset_shapes():
    pr = bounds.theorem_presets("Thm4.5(ii)", sigma=0.15)
    # sigma = d(k+2)/n sits exactly on the strict inequality
    assert pr.name == "thm4.5ii" and pr.violated == ["d < sigma n/(k+2)"]
    assert not bounds.theorem_presets("thm4.5ii").violated
    assert pr.eps_nominal == pytest.approx((0.05 - 0.0025) / ((1 - 0.15 - 0.1) ** 2 * 200), rel=1e-12)
    bad = bounds.theorem_presets("thm4.5ii", d=5)
    assert "d < sigma n/(k+2)" in bad.violated
    for name in ("thm4.4", "cor4.4", "thm4.5v", "thm2"):
        p = bounds.theorem_presets(name)
        assert p.bound_only and not p.executable
    assert set(bounds.theorem_presets("cor4.4").to_dict()) >= {"constraints", "formula", "eps_nominal", "queries"}


def test_thm2_comparison_golden():
    row = bounds.thm2_comparison()
    g = GOLDEN["thm2_comparison"]
    assert (row["n"], row["k"], row["s"]) == (g["n"], g["k"], g["s"])
    assert row["ratio"] == pytest.approx(g["ratio"], rel=1e-12)
    assert row["ratio"] < 1
