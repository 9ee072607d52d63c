"""Bounded-distance decoders for the power codes C(d'G, P).

All decoders work on a stack of received words at once and report, per
word, whether a codeword within the stated radius was found.  Every success
is re-checked (membership and distance) before it is reported, so a
miscorrection beyond the radius shows up as a failure rather than a wrong
answer whenever it is detectable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import linalg
from .codex import PowerCodeView
from .function_fields import RationalCurve, Place, rr_basis
from .gf import GF


class DecoderError(ValueError):
    pass


DECODED = "Decoded"
FAIL = "Fail"


@dataclass
class DecodeOutcome:
    status: str
    word: np.ndarray | None = None
    error_positions: tuple = ()
    radius: int = 0
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == DECODED


@dataclass
class BatchResult:
    ok: np.ndarray  # (B,) bool
    words: np.ndarray  # (B, n); garbage where not ok
    radius: int

    def outcome(self, i: int, received) -> DecodeOutcome:
        if not self.ok[i]:
            return DecodeOutcome(FAIL, radius=self.radius)
        w = self.words[i]
        pos = tuple(int(j) for j in np.nonzero(w != np.asarray(received))[0])
        return DecodeOutcome(DECODED, w.copy(), pos, self.radius)


def _as_batch(R):
    R = np.asarray(R, dtype=np.int64)
    return (R[None], True) if R.ndim == 1 else (R, False)


def rs_radius(n: int, max_deg: int) -> int:
    return (n - max_deg - 1) // 2


# -- Reed-Solomon: syndromes + Berlekamp-Massey + Forney -------------------

class RSDecoder:
    """Unique decoding of {(f(x_1), ..., f(x_n)) : deg f <= max_deg}.

    The code is generalized Reed-Solomon with dual column multipliers
    v_j = 1 / prod_{l != j} (x_j - x_l).  Locators are X_j = x_j - beta for a
    field element beta outside the point set, so none of them is zero.
    """

    CHUNK = 4096

    def __init__(self, F: GF, points, max_deg: int):
        self.F = F
        self.points = np.asarray(points, dtype=np.int64)
        n = len(self.points)
        if len(set(self.points.tolist())) != n:
            raise DecoderError("evaluation points must be distinct")
        if not 0 <= max_deg < n:
            raise DecoderError(f"need 0 <= max_deg < n (max_deg={max_deg}, n={n})")
        self.n, self.max_deg = n, max_deg
        self.K = max_deg + 1
        self.N = n - self.K
        self.tau = rs_radius(n, max_deg)
        free = sorted(set(range(F.q)) - set(self.points.tolist()))
        self.fallback = None
        if not free:
            self.fallback = AGDecoder(RationalCurve(F), [Place("rational", (int(x),)) for x in self.points], max_deg)
            return
        beta = free[0]
        X = F.sub(self.points, beta)
        diff = F.sub(self.points[:, None], self.points[None, :])
        np.fill_diagonal(diff, 1)
        v = F.inv(_prod(F, diff, axis=1))
        self.X, self.v, self.v_inv = X, v, F.inv(v)
        powers = np.ones((max(self.N, 1), n), dtype=np.int64)
        for i in range(1, self.N):
            powers[i] = F.mul(powers[i - 1], X)
        self.H = F.mul(powers[: self.N], v[None, :])  # (N, n)
        Xi = F.inv(X)
        w = self.tau + 1
        vin = np.ones((w, n), dtype=np.int64)
        for i in range(1, w):
            vin[i] = F.mul(vin[i - 1], Xi)
        self.Vinv = vin  # (tau+1, n): X_j^{-i}
        # interpolation on the first K points, for re-encoding and coefficient recovery
        self.vander = np.stack([F.pow(self.points, i) for i in range(self.K)])  # (K, n)

    def syndromes(self, R):
        return self.F.matmul(R, self.H.T)

    def decode_batch(self, R) -> BatchResult:
        R, _ = _as_batch(R)
        if self.fallback is not None:
            return self.fallback.decode_batch(R)
        B = len(R)
        ok = np.zeros(B, dtype=bool)
        words = R.copy()
        for s in range(0, B, self.CHUNK):
            o, w = self._decode_chunk(R[s:s + self.CHUNK])
            ok[s:s + self.CHUNK], words[s:s + self.CHUNK] = o, w
        return BatchResult(ok, words, self.tau)

    def _decode_chunk(self, R):
        F, N, tau = self.F, self.N, self.tau
        B, n = R.shape
        if N == 0:
            return np.ones(B, dtype=bool), R.copy()
        S = self.syndromes(R)
        ok = ~np.any(S != 0, axis=1)
        words = R.copy()
        todo = np.nonzero(~ok)[0]
        if len(todo) == 0 or tau == 0:
            return ok, words
        S = S[todo]
        Lam, L = _berlekamp_massey(F, S, tau)
        good = L <= tau
        w = tau + 1
        Lam = Lam[:, :w]
        ev = F.matmul(Lam, self.Vinv)  # Lambda(X_j^{-1})
        roots = ev == 0
        good &= roots.sum(axis=1) == L
        # Omega = S * Lambda mod z^L  (deg Omega < L <= tau)
        Om = np.zeros((len(todo), w), dtype=np.int64)
        for i in range(w - 1):
            Om[:, i] = F.sum(F.mul(S[:, i::-1][:, : i + 1], Lam[:, : i + 1]), axis=1)
        dL = np.zeros_like(Lam)
        for i in range(w - 1):
            dL[:, i] = F.mul((i + 1) % F.p, Lam[:, i + 1])
        om_ev = F.matmul(Om, self.Vinv)
        dl_ev = F.matmul(dL, self.Vinv)
        good &= ~np.any(roots & (dl_ev == 0), axis=1)
        Y = F.neg(F.mul(self.X[None, :], F.div(om_ev, np.where(dl_ev == 0, 1, dl_ev))))
        E = np.where(roots, F.mul(Y, self.v_inv[None, :]), 0)
        C = F.sub(R[todo], E)
        if good.any():
            chk = self.syndromes(C[good])
            g = np.nonzero(good)[0]
            good[g[np.any(chk != 0, axis=1)]] = False
        good &= (C != R[todo]).sum(axis=1) <= tau
        ok[todo] = good
        words[todo] = np.where(good[:, None], C, R[todo])
        return ok, words

    def coefficients(self, words):
        """Coefficients (..., K) of the polynomial behind codewords."""
        F = self.F
        A = self.vander[:, : self.K]
        Ainv = linalg.inverse(F, A)
        return F.matmul(np.asarray(words)[..., : self.K], Ainv)

    def encode(self, coeffs):
        return self.F.matmul(np.asarray(coeffs), self.vander)


def _prod(F: GF, a, axis: int):
    a = np.moveaxis(np.asarray(a), axis, -1)
    out = a[..., 0]
    for i in range(1, a.shape[-1]):
        out = F.mul(out, a[..., i])
    return out


def _berlekamp_massey(F: GF, S, tau: int):
    """Batched Massey's algorithm on syndrome rows S (B, N).

    Returns connection polynomials (B, N+1) and their lengths L (B,).  Rows
    whose length exceeds tau are left as they are; the caller rejects them.
    """
    B, N = S.shape
    W = N + 1
    C = np.zeros((B, W), dtype=np.int64)
    C[:, 0] = 1
    Bp = C.copy()
    L = np.zeros(B, dtype=np.int64)
    m = np.ones(B, dtype=np.int64)
    b = np.ones(B, dtype=np.int64)
    cols = np.arange(W)
    rows = np.arange(B)
    for r in range(N):
        w = min(int(L.max()) + 1, W)
        win = S[:, r::-1][:, :w]
        if win.shape[1] < w:
            win = np.pad(win, ((0, 0), (0, w - win.shape[1])))
        delta = F.sum(F.mul(C[:, :w], win), axis=1)
        nz = delta != 0
        if not nz.any():
            m += 1
            continue
        coef = F.div(delta, b)
        idx = cols[None, :] - m[:, None]
        shifted = np.where(idx >= 0, Bp[rows[:, None], np.clip(idx, 0, W - 1)], 0)
        newC = F.sub(C, F.mul(coef[:, None], shifted))
        grow = nz & (2 * L <= r)
        T = C.copy()
        C = np.where(nz[:, None], newC, C)
        Bp = np.where(grow[:, None], T, Bp)
        b = np.where(grow, delta, b)
        L = np.where(grow, r + 1 - L, L)
        m = np.where(grow, 1, m + 1)
    return C, L


@lru_cache(maxsize=64)
def _rs_decoder_cached(F: GF, points: tuple, max_deg: int) -> RSDecoder:
    return RSDecoder(F, np.array(points, dtype=np.int64), max_deg)


def rs_decoder(F: GF, points, max_deg: int) -> RSDecoder:
    return _rs_decoder_cached(F, tuple(int(x) for x in np.asarray(points)), int(max_deg))


def rs_decode(received, points, max_deg: int, F: GF) -> DecodeOutcome:
    """Unique decoding up to floor((n - max_deg - 1) / 2) errors."""
    dec = rs_decoder(F, points, max_deg)
    res = dec.decode_batch(np.asarray(received)[None])
    return res.outcome(0, received)


def ee_decode(received, erasures, points, max_deg: int, F: GF) -> DecodeOutcome:
    """Errors and erasures: succeeds when 2*errors + |S| <= n - max_deg - 1."""
    received = np.asarray(received, dtype=np.int64)
    points = np.asarray(points, dtype=np.int64)
    n = len(points)
    S = sorted(set(int(i) for i in erasures))
    keep = np.array([i for i in range(n) if i not in set(S)], dtype=np.int64)
    radius = (n - len(S) - max_deg - 1) // 2
    if len(keep) <= max_deg:
        return DecodeOutcome(FAIL, radius=max(radius, 0), info={"reason": "too many erasures"})
    dec = rs_decoder(F, points[keep], max_deg)
    res = dec.decode_batch(received[keep][None])
    if not res.ok[0]:
        return DecodeOutcome(FAIL, radius=radius)
    coeffs = dec.coefficients(res.words[0])
    full = F.matmul(coeffs, np.stack([F.pow(points, i) for i in range(max_deg + 1)]))
    pos = tuple(int(j) for j in keep[np.nonzero(full[keep] != received[keep])[0]])
    return DecodeOutcome(DECODED, full, pos, radius, {"erasures": tuple(S)})


# -- the basic algorithm for one-point AG codes -----------------------------

class AGDecoder:
    """Error-locator decoding of C(a*inf, P) with erasures.

    With s erased positions the radius is tau_s = floor((n - s - a - 1)/2) - g.
    A locator theta in L((tau+g) inf) and theta' in L((tau+g+a) inf) solve
    theta(P_i) r_i = theta'(P_i) on the unerased positions; the zeros of theta
    cover the errors, and the codeword is re-solved from the remaining ones.
    """

    CHUNK = 2048

    def __init__(self, curve, places, a: int):
        self.curve = curve
        self.F = curve.field
        self.places = list(places)
        self.n = len(self.places)
        self.a = a
        self.g = curve.genus
        self.code_basis = rr_basis(curve, a)
        self.gen = self.code_basis.eval_matrix(self.places)  # (Da, n)
        if self.gen.shape[0] >= self.n:
            raise DecoderError("code has no redundancy at this length")
        self._bases = {}

    def radius(self, s: int = 0) -> int:
        return (self.n - s - self.a - 1) // 2 - self.g

    def _locator_mats(self, tau: int):
        if tau not in self._bases:
            e1 = rr_basis(self.curve, tau + self.g).eval_matrix(self.places)
            e2 = rr_basis(self.curve, tau + self.g + self.a).eval_matrix(self.places)
            self._bases[tau] = (e1, e2)
        return self._bases[tau]

    def decode_batch(self, R, erased=None) -> BatchResult:
        R, _ = _as_batch(R)
        B = len(R)
        if erased is None:
            erased = np.zeros(R.shape, dtype=bool)
        erased = np.asarray(erased, dtype=bool)
        ok = np.zeros(B, dtype=bool)
        words = R.copy()
        counts = erased.sum(axis=1)
        for s in np.unique(counts):
            rows = np.nonzero(counts == s)[0]
            for c in range(0, len(rows), self.CHUNK):
                rr = rows[c:c + self.CHUNK]
                o, w = self._decode_group(R[rr], erased[rr], int(s))
                ok[rr], words[rr] = o, w
        return BatchResult(ok, words, max(self.radius(0), 0))

    def _decode_group(self, R, erased, s: int):
        F = self.F
        B, n = R.shape
        tau = self.radius(s)
        Da = self.gen.shape[0]
        if n - s <= Da:
            return np.zeros(B, dtype=bool), R.copy()
        if tau <= 0:
            zeros = erased
            tau = 0
        else:
            e1, e2 = self._locator_mats(tau)
            D1, D2 = len(e1), len(e2)
            M = np.concatenate([F.mul(e1.T[None], R[:, :, None]),
                                np.broadcast_to(F.neg(e2.T), (B, n, D2))], axis=2)
            M = np.where(erased[:, :, None], 0, M)
            Rr, piv, rank = linalg.batched_rref(F, M)
            has_kernel = rank < D1 + D2
            x = _kernel_vector(F, Rr, piv, rank)
            theta = F.matmul(x[:, :D1], e1)  # (B, n)
            zeros = (theta == 0) | erased
            zeros |= ~has_kernel[:, None]
        # solve for the codeword on the positions outside the zero set
        aug = np.concatenate([np.broadcast_to(self.gen.T, (B, n, Da)), R[:, :, None]], axis=2)
        aug = np.where(zeros[:, :, None], 0, aug)
        Rr, piv, rank = linalg.batched_rref(F, aug, ncols=Da)
        rows = np.arange(n)[None, :]
        consistent = ~np.any((rows >= rank[:, None]) & (Rr[:, :, Da] != 0), axis=1)
        ok = consistent & (rank == Da)
        h = Rr[:, :Da, Da]  # full rank: pivots are 0..Da-1 in order
        words = F.matmul(h, self.gen)
        dist = ((words != R) & ~erased).sum(axis=1)
        ok &= dist <= tau
        return ok, np.where(ok[:, None], words, R)


def _kernel_vector(F: GF, Rr, piv, rank):
    """One nonzero kernel vector per reduced matrix (zeros where none exists)."""
    B, _, C = Rr.shape
    is_piv = np.zeros((B, C), dtype=bool)
    b_idx, r_idx = np.nonzero(piv >= 0)
    is_piv[b_idx, piv[b_idx, r_idx]] = True
    free = np.argmax(~is_piv, axis=1)  # first free column
    x = np.zeros((B, C), dtype=np.int64)
    x[np.arange(B), free] = 1
    # x_{pivot(row)} = -Rr[row, free]
    vals = F.neg(Rr[np.arange(B)[:, None], np.arange(Rr.shape[1])[None, :], free[:, None]])
    x[b_idx, piv[b_idx, r_idx]] = vals[b_idx, r_idx]
    x[rank >= C] = 0
    return x


def ag_decoder_for(view: PowerCodeView) -> AGDecoder:
    key = "_ag_decoder"
    dec = getattr(view, key, None)
    if dec is None:
        dec = AGDecoder(view.codex.curve, view.codex.P, view.degree)
        setattr(view, key, dec)
    return dec


def hermitian_decode(received, view: PowerCodeView) -> DecodeOutcome:
    """Basic-algorithm decoding in C(d'G, P) up to floor((n - deg d'G - 1)/2) - g."""
    dec = ag_decoder_for(view)
    if view.degree + 2 * dec.g >= dec.n:
        raise DecoderError("deg(d'G) + 2g must be below n")
    res = dec.decode_batch(np.asarray(received)[None])
    return res.outcome(0, received)


def view_decode_batch(view: PowerCodeView, R) -> BatchResult:
    """Decode in C(d'G, P) with the decoder the codex calls for."""
    cdx = view.codex
    if cdx.decoder == "rs":
        pts = np.array([P.coords[0] for P in cdx.P], dtype=np.int64)
        return rs_decoder(cdx.field, pts, view.degree).decode_batch(R)
    return ag_decoder_for(view).decode_batch(R)


def view_radius(view: PowerCodeView) -> int:
    cdx = view.codex
    if cdx.decoder == "rs":
        return rs_radius(cdx.n, view.degree)
    return ag_decoder_for(view).radius(0)


# -- exhaustive reference ---------------------------------------------------

BRUTE_BUDGET = 10 ** 8


class BruteForceDecoder:
    """Syndrome table over every error pattern of weight <= tau."""

    def __init__(self, F: GF, parity, tau: int):
        self.F = F
        self.H = np.asarray(parity, dtype=np.int64)
        self.n = self.H.shape[1]
        self.tau = tau
        q, n = F.q, self.n
        budget = sum(math.comb(n, w) * (q - 1) ** w for w in range(tau + 1))
        if budget > BRUTE_BUDGET:
            raise DecoderError(f"{budget} error patterns exceed the budget of {BRUTE_BUDGET}")
        pats = [np.zeros(n, dtype=np.int64)]
        for w in range(1, tau + 1):
            for supp in itertools.combinations(range(n), w):
                vals = np.array(list(itertools.product(range(1, q), repeat=w)), dtype=np.int64)
                block = np.zeros((len(vals), n), dtype=np.int64)
                block[:, list(supp)] = vals
                pats.append(block)
        pats = np.vstack([p.reshape(-1, n) for p in pats])
        syn = F.matmul(pats, self.H.T) if self.H.size else np.zeros((len(pats), 0), dtype=np.int64)
        self.patterns = pats
        self.table: dict = {}
        for i, sv in enumerate(map(bytes, syn.astype(np.int32))):
            self.table[sv] = -1 if sv in self.table else i  # -1 marks an ambiguous syndrome

    def decode_batch(self, R) -> BatchResult:
        R, _ = _as_batch(R)
        syn = self.F.matmul(R, self.H.T) if self.H.size else np.zeros((len(R), 0), dtype=np.int64)
        idx = np.array([self.table.get(bytes(s), -1) for s in syn.astype(np.int32)], dtype=np.int64)
        ok = idx >= 0
        E = self.patterns[np.where(ok, idx, 0)]
        words = np.where(ok[:, None], self.F.sub(R, E), R)
        return BatchResult(ok, words, self.tau)


def brute_force_decode(received, parity, tau: int, F: GF) -> DecodeOutcome:
    """The unique codeword within tau of the received word, by exhaustion.

    ``parity`` is a parity-check matrix of the supercode or a PowerCodeView.
    """
    if isinstance(parity, PowerCodeView):
        parity = parity.parity
    dec = BruteForceDecoder(F, parity, tau)
    return dec.decode_batch(np.asarray(received)[None]).outcome(0, received)


# -- GMD for the interleaved code -------------------------------------------

class GMDDecoder:
    """Forney GMD over blocks of the interleaved codex.

    Inner: each length-q block is mapped to the GF(q^2) symbol whose preimage
    coset in pi(GF(q^2))^{*d} is nearest; the distance is the block's
    unreliability.  Outer: errors-and-erasures basic algorithm for
    C(dG, P), erasing the 0, 2, 4, ... least reliable blocks.  A candidate is
    accepted when its concatenated distance to the received word is at most
    R = ceil(D_in * D_out / 2) - 1, with D_in = q - d and D_out = n - deg(dG) - 2g.
    """

    def __init__(self, icdx, power: int | None = None):
        self.icdx = icdx
        self.mfp = icdx.mfp
        self.view = icdx.outer.power(icdx.d if power is None else power)
        self.outer = ag_decoder_for(self.view)
        self.q, self.n = icdx.q, icdx.n
        d = self.view.power
        self.d_in = self.q - d
        self.d_out = self.n - self.view.degree - 2 * self.outer.g
        self.radius = max(math.ceil(self.d_in * self.d_out / 2) - 1, 0)
        self.table = self.mfp.coset_distance

    def decode_batch(self, Y) -> BatchResult:
        Y, _ = _as_batch(Y)
        B = len(Y)
        D = self.table[self.mfp.block_code(Y)]  # (B, n, q^2)
        sym = np.argmin(D, axis=2)
        rel = np.take_along_axis(D, sym[..., None], axis=2)[..., 0]
        order = np.argsort(-rel, axis=1, kind="stable")  # least reliable first
        ok = np.zeros(B, dtype=bool)
        words = np.zeros((B, self.n), dtype=np.int64)
        pending = np.arange(B)
        for s in range(0, max(self.d_out, 1), 2):
            if len(pending) == 0:
                break
            erased = np.zeros((len(pending), self.n), dtype=bool)
            if s:
                np.put_along_axis(erased, order[pending, :s], True, axis=1)
            res = self.outer.decode_batch(sym[pending], erased)
            cand = res.words
            cdist = np.take_along_axis(D[pending], cand[..., None], axis=2)[..., 0].sum(axis=1)
            acc = res.ok & (cdist <= self.radius)
            ok[pending[acc]] = True
            words[pending[acc]] = cand[acc]
            pending = pending[~acc]
        return BatchResult(ok, words, self.radius)


def gmd_decode(received, icdx) -> DecodeOutcome:
    dec = GMDDecoder(icdx)
    res = dec.decode_batch(np.asarray(received)[None])
    if not res.ok[0]:
        return DecodeOutcome(FAIL, radius=dec.radius)
    z = res.words[0]
    received = np.asarray(received, dtype=np.int64)
    word = dec.mfp.nearest_in_coset(received, z)
    pos = tuple(int(i) for i in np.nonzero(word != received)[0])
    return DecodeOutcome(DECODED, word, pos, dec.radius, {"outer_word": z})
