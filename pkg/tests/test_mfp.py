import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codex_lcc import linalg
from codex_lcc.codex import CodexError, hermitian_codex
from codex_lcc.mfp import (MFPError, build_mfp, interleave, interleaved_parameters, mfp_apply_pi, varphi,
                           weak_privacy_check)


def test_gf9_square_of_gamma():
    mfp = build_mfp(2, 3)
    g = mfp.gamma
    assert mfp.pi(np.array([g])).tolist() == [0, 1, 2]
    sq = mfp.sub.mul(mfp.pi(np.array([g])), mfp.pi(np.array([g])))
    assert sq.tolist() == [0, 1, 1]
    assert mfp.phi(sq).tolist() == [2]


def test_pi_of_one_is_all_ones():
    for q in (3, 4, 5):
        assert build_mfp(2, q).pi(np.array([1])).tolist() == [1] * q


def test_q_not_above_d_rejected():
    with pytest.raises(MFPError):
        build_mfp(2, 2)


def test_identity_exhaustive_over_gf9():
    mfp = build_mfp(2, 3)
    E, S = mfp.ext, mfp.sub
    a, b = (x.ravel() for x in np.meshgrid(np.arange(9), np.arange(9), indexing="ij"))
    pa = mfp.pi(a[:, None])
    pb = mfp.pi(b[:, None])
    assert np.array_equal(mfp.phi(S.mul(pa, pb))[:, 0], E.mul(a, b))


@pytest.mark.parametrize("q,d", [(3, 2), (4, 2), (5, 2), (5, 3), (4, 3)])
def test_identity_for_d_fold_products(q, d):
    mfp = build_mfp(d, q)
    E, S = mfp.ext, mfp.sub
    rng = np.random.default_rng(q * 10 + d)
    xs = rng.integers(0, q * q, (300, d))
    blocks = mfp.pi(xs[..., None])  # (300, d, q)
    prod = blocks[:, 0]
    want = xs[:, 0]
    for i in range(1, d):
        prod = S.mul(prod, blocks[:, i])
        want = E.mul(want, xs[:, i])
    assert np.array_equal(mfp.phi(prod)[:, 0], want)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_pi_is_injective(q):
    mfp = build_mfp(2, q)
    imgs = {tuple(mfp.pi(np.array([a]))) for a in range(q * q)}
    assert len(imgs) == q * q


@pytest.mark.parametrize("q,d", [(3, 2), (4, 2), (5, 2), (5, 3)])
def test_inner_power_code_distance_exhaustive(q, d):
    mfp = build_mfp(d, q)
    w = mfp.inner_words
    assert min(int(np.count_nonzero(x)) for x in w if np.any(x)) == q - d


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 31), s=st.integers(1, 6))
def test_blockwise_pi_is_linear(seed, s):
    mfp = build_mfp(2, 4)
    rng = np.random.default_rng(seed)
    u, v = rng.integers(0, 16, (2, s))
    lhs = mfp_apply_pi(mfp, mfp.ext.add(u, v))
    assert lhs.shape == (4 * s,)
    assert np.array_equal(lhs, mfp.sub.add(mfp_apply_pi(mfp, u), mfp_apply_pi(mfp, v)))
    assert np.array_equal(mfp_apply_pi(mfp, u[:1]), mfp.pi(u[:1]))


def test_hermitian_r20_parameter_arithmetic():
    p = interleaved_parameters(63, 4, 2, 20)
    assert p["r_prime"] == 206 and p["length"] == 252
    assert p["distance_bound"] == 47 and p["concatenated_distance"] == 88
    assert p["concatenated_distance"] >= p["distance_bound"]


def test_interleaved_structure(herm4_interleaved):
    ic = herm4_interleaved
    assert ic.length == 252 and ic.r_prime == 2 * 63 + 4 * 33
    assert ic.dim == 2 * ic.outer.dim - ic.k
    assert linalg.rank(ic.mfp.sub, ic.gen) == ic.dim
    assert varphi(ic, np.ones(252, dtype=np.int64)).tolist() == [1]


def test_weak_privacy(herm4_interleaved):
    rep = weak_privacy_check(herm4_interleaved, samples=200, seed=4)
    assert rep["passed"], rep


def test_varphi_round_trip_and_multiplicativity(herm4_interleaved):
    ic = herm4_interleaved
    S = ic.mfp.sub
    rng = np.random.default_rng(8)
    coeffs = rng.integers(0, 4, (100, 2, ic.dim))
    pre = ic.mfp.ext.matmul(coeffs, ic.pre_basis)  # GF(q) codes embed unchanged into GF(q^2)
    z = ic.mfp.pi(pre)  # (100, 2, 252)
    img = ic.outer.power(1).psi(pre)
    assert np.all(img < 4)
    for i in range(100):
        assert np.array_equal(varphi(ic, z[i, 0], 1), img[i, 0])
        prod = S.mul(z[i, 0], z[i, 1])
        assert np.array_equal(varphi(ic, prod), S.mul(img[i, 0], img[i, 1]))


def test_varphi_rejects_non_code_blocks(herm4_interleaved):
    bad = np.zeros(252, dtype=np.int64)
    bad[:4] = [0, 1, 0, 0]  # a delta function is not a degree <= 2 evaluation over GF(4)
    with pytest.raises(CodexError):
        varphi(herm4_interleaved, bad)


def test_interleave_checks_arity():
    with pytest.raises(MFPError):
        interleave(hermitian_codex(4, 1, 4, 2, 33), build_mfp(3, 4))
