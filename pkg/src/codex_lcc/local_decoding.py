"""Local recovery of k values of a Reed-Muller codeword from a corrupted oracle.

Single-field scheme (codex over GF(q)): for each variable i draw c_i in C with
psi(c_i) = (w_{1,i}, ..., w_{k,i}); the query points are the columns
v_j = (c_1[j], ..., c_m[j]).  The answers form a noisy word of C^{*d}, whose
decoding z gives f(w_1), ..., f(w_k) = psi(z).

Interleaved scheme: the c_i live over GF(q^2); pi expands each to
q*n symbols over GF(q), which become the query columns, and the decoded word
is mapped back with psi after blockwise phi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codex import Codex, CodexError
from .decoders import GMDDecoder, view_decode_batch, view_radius
from .mfp import InterleavedCodex
from .rm import CorruptedWordOracle

RECOVERED = "Recovered"
FAIL = "Fail"


@dataclass
class QueryPlan:
    targets: np.ndarray  # (k, m)
    codewords: np.ndarray  # (m, n), over GF(q^2) for the interleaved scheme
    points: np.ndarray  # (n, m) or (q*n, m)
    seed: object = None

    @property
    def size(self) -> int:
        return len(self.points)


@dataclass
class RecoveryResult:
    status: str
    values: np.ndarray | None
    queries: int
    radius: int

    @property
    def ok(self) -> bool:
        return self.status == RECOVERED


def _check_targets(cdx: Codex, targets) -> np.ndarray:
    targets = np.asarray(targets, dtype=np.int64)
    if targets.ndim != 2 or targets.shape[0] != cdx.k:
        raise CodexError(f"expected {cdx.k} target points, got shape {targets.shape}")
    return targets


def kernel_draws(cdx: Codex, rng: np.random.Generator, m: int, q: int | None = None) -> np.ndarray:
    """The random kernel coordinates that pick c_1..c_m inside their cosets."""
    return rng.integers(0, q or cdx.field.q, size=(m, cdx.kernel.shape[0]))


def coset_codewords(cdx: Codex, targets, draws) -> np.ndarray:
    """c_i = section(target column i) + kernel combination; batched over leading axes.

    targets (..., k, m), draws (..., m, dim - k) -> (..., m, n)
    """
    targets = np.asarray(targets, dtype=np.int64)
    cols = np.swapaxes(targets, -1, -2)  # (..., m, k)
    return cdx.field.matmul(np.concatenate([cols, draws], axis=-1), cdx._affine)


def plan_queries_alg1(cdx: Codex, targets, seed) -> QueryPlan:
    targets = _check_targets(cdx, targets)
    rng = np.random.default_rng(seed)
    m = targets.shape[1]
    C = coset_codewords(cdx, targets, kernel_draws(cdx, rng, m))
    return QueryPlan(targets, C, C.T.copy(), seed)


def plan_queries_alg2(icdx: InterleavedCodex, targets, seed) -> QueryPlan:
    cdx = icdx.outer
    targets = _check_targets(cdx, targets)
    if targets.max(initial=0) >= icdx.q:
        raise CodexError("targets must lie in GF(q)^m")
    rng = np.random.default_rng(seed)
    m = targets.shape[1]
    C = coset_codewords(cdx, targets, kernel_draws(cdx, rng, m))
    return QueryPlan(targets, C, icdx.mfp.pi(C).T.copy(), seed)


# -- batched cores (used by the harness) ------------------------------------

def alg1_batch(cdx: Codex, oracle: CorruptedWordOracle, targets, draws):
    """Run the single-field scheme on a stack of trials.

    Returns (ok (B,), values (B, k), points (B, n, m)).
    """
    C = coset_codewords(cdx, targets, draws)  # (B, m, n)
    pts = np.swapaxes(C, -1, -2)
    y = oracle.query(pts)
    view = cdx.power(cdx.d)
    res = view_decode_batch(view, y)
    vals = view.psi(res.words)
    return res.ok, vals, pts


def alg2_batch(icdx: InterleavedCodex, oracle: CorruptedWordOracle, targets, draws, gmd: GMDDecoder | None = None):
    cdx = icdx.outer
    C = coset_codewords(cdx, targets, draws)  # (B, m, n) over GF(q^2)
    pts = np.swapaxes(icdx.mfp.pi(C), -1, -2)  # (B, qn, m)
    y = oracle.query(pts)
    gmd = gmd or GMDDecoder(icdx)
    res = gmd.decode_batch(y)
    vals = cdx.power(cdx.d).psi(res.words)
    ok = res.ok & np.all(vals < icdx.q, axis=-1)
    return ok, vals, pts


def recover_alg1(cdx: Codex, oracle: CorruptedWordOracle, targets, seed) -> RecoveryResult:
    plan = plan_queries_alg1(cdx, targets, seed)
    if oracle.field != cdx.field:
        raise CodexError("oracle alphabet differs from the codex field")
    before = oracle.queries
    y = oracle.query(plan.points)
    view = cdx.power(cdx.d)
    res = view_decode_batch(view, y[None])
    radius = view_radius(view)
    used = oracle.queries - before
    if not res.ok[0]:
        return RecoveryResult(FAIL, None, used, radius)
    return RecoveryResult(RECOVERED, view.psi(res.words[0]), used, radius)


def recover_alg2(icdx: InterleavedCodex, oracle: CorruptedWordOracle, targets, seed) -> RecoveryResult:
    plan = plan_queries_alg2(icdx, targets, seed)
    if oracle.field != icdx.mfp.sub:
        raise CodexError("oracle alphabet differs from GF(q)")
    before = oracle.queries
    y = oracle.query(plan.points)
    gmd = GMDDecoder(icdx)
    res = gmd.decode_batch(y[None])
    used = oracle.queries - before
    if not res.ok[0]:
        return RecoveryResult(FAIL, None, used, gmd.radius)
    vals = icdx.outer.power(icdx.d).psi(res.words[0])
    if np.any(vals >= icdx.q):
        return RecoveryResult(FAIL, None, used, gmd.radius)
    return RecoveryResult(RECOVERED, vals, used, gmd.radius)
