import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from codex_lcc.codex import CodexError, rational_codex
from codex_lcc.local_decoding import (alg1_batch, coset_codewords, plan_queries_alg1, plan_queries_alg2,
                                      recover_alg1, recover_alg2)
from codex_lcc.decoders import view_radius
from codex_lcc.rm import CorruptedWordOracle, rm_random_poly


@pytest.fixture(scope="module")
def gf31_codex():
    return rational_codex(31, 2, 2, 2, 7, 29)


def _oracle(cdx_field, q, d, m, seed=0, **kw):
    return CorruptedWordOracle(rm_random_poly(q, d, m, seed, cdx_field), **kw)


def test_plan_codewords_map_to_target_columns(gf31_codex):
    cdx = gf31_codex
    targets = np.array([[1, 2, 3], [4, 5, 6]])
    plan = plan_queries_alg1(cdx, targets, 7)
    assert plan.size == cdx.n
    for i in range(3):
        assert np.array_equal(cdx.psi(plan.codewords[i]), targets[:, i])
    assert np.array_equal(plan.points, plan.codewords.T)


def test_plan_is_seed_deterministic(gf31_codex):
    t = np.array([[0, 0, 1], [1, 0, 0]])
    a = plan_queries_alg1(gf31_codex, t, 3).points
    b = plan_queries_alg1(gf31_codex, t, 3).points
    c = plan_queries_alg1(gf31_codex, t, 4).points
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_wrong_target_count_rejected(gf31_codex):
    with pytest.raises(CodexError):
        plan_queries_alg1(gf31_codex, np.zeros((3, 2)), 0)


def test_alg2_plan_columns_and_range(herm4_interleaved):
    ic = herm4_interleaved
    plan = plan_queries_alg2(ic, np.array([[1, 2, 3, 0]]), 5)
    assert plan.points.shape == (ic.q * ic.n, 4)
    assert plan.points.max() < ic.q
    with pytest.raises(CodexError):
        plan_queries_alg2(ic, np.array([[9, 0, 0, 0]]), 5)


def test_pairwise_uniform_columns_exact():
    """Over every kernel draw, each pair of columns hits every pair of field values equally often."""
    cdx = rational_codex(5, 1, 2, 1, 3, 4)
    kd = cdx.kernel.shape[0]
    draws = np.array(list(itertools.product(range(5), repeat=kd)))[:, None, :]
    C = coset_codewords(cdx, np.full((len(draws), 1, 1), 3), draws)[:, 0]  # (5^kd, n)
    for j1, j2 in itertools.combinations(range(cdx.n), 2):
        counts = np.bincount(C[:, j1] * 5 + C[:, j2], minlength=25)
        assert len(set(counts)) == 1


def test_zero_error_recovery_alg1(gf31_codex):
    cdx = gf31_codex
    o = _oracle(cdx.field, 31, 2, 3)
    rng = np.random.default_rng(0)
    for s in range(20):
        t = rng.integers(0, 31, (2, 3))
        res = recover_alg1(cdx, o, t, s)
        assert res.ok and np.array_equal(res.values, o.f(t))
    assert o.queries == 20 * cdx.n


def test_zero_error_recovery_alg2(herm4_interleaved):
    ic = herm4_interleaved
    o = _oracle(ic.mfp.sub, 4, 2, 4)
    rng = np.random.default_rng(1)
    for s in range(10):
        t = rng.integers(0, 4, (1, 4))
        res = recover_alg2(ic, o, t, s)
        assert res.ok and np.array_equal(res.values, o.f(t))
        assert res.queries == 252


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), nerr=st.integers(0, 11))
def test_planted_errors_within_radius_recovered(gf31_codex, seed, nerr):
    cdx = gf31_codex
    f = rm_random_poly(31, 2, 3, seed, cdx.field)
    rng = np.random.default_rng(seed)
    t = rng.integers(0, 31, (2, 3))
    plan = plan_queries_alg1(cdx, t, seed)
    hit = rng.choice(cdx.n, nerr, replace=False)
    over = {tuple(int(x) for x in plan.points[j]): int((f(plan.points[j]) + 1) % 31) for j in hit}
    o = CorruptedWordOracle(f, model="file", overrides=over)
    bad = int(o.corrupted(plan.points).sum())
    res = recover_alg1(cdx, o, t, seed)
    assert res.queries == cdx.n
    if bad <= view_radius(cdx.power(2)):
        assert res.ok and np.array_equal(res.values, f(t))


def test_batch_matches_single(gf31_codex):
    cdx = gf31_codex
    o = _oracle(cdx.field, 31, 2, 3, delta=0.2, model="prf", seed=9)
    rng = np.random.default_rng(2)
    T = rng.integers(0, 31, (6, 2, 3))
    D = rng.integers(0, 31, (6, 3, cdx.kernel.shape[0]))
    ok, vals, pts = alg1_batch(cdx, o, T, D)
    for i in range(6):
        C = coset_codewords(cdx, T[i], D[i])
        assert np.array_equal(pts[i], C.T)


def test_alg1_hermitian_queries(herm3_codex):
    o = _oracle(herm3_codex.field, 9, 2, 2)
    res = recover_alg1(herm3_codex, o, np.array([[4, 5]]), 0)
    assert res.ok and res.queries == 26 and res.radius == 2
