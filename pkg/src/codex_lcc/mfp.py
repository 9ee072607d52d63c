"""Multiplication-friendly pairs and the interleaved codex over GF(q).

An element a0 + a1*g of GF(q^2) (g the adjoined root) is sent by pi to the
evaluations of the line a0 + a1*x at every point of GF(q).  Products of d such
blocks are evaluations of polynomials of degree <= d, so phi interpolates
through d + 1 points and evaluates at g.  Concatenating a GF(q^2)-codex with
(pi, phi) gives codewords of length q*n over GF(q), stored block-major:
position i*q + j is point x_j of outer coordinate i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .codex import Codex, CodexError
from .gf import GF, quadratic_tower


class MFPError(ValueError):
    pass


@dataclass
class MFP:
    d: int
    sub: GF  # GF(q)
    ext: GF  # GF(q^2) as GF(q)[x]/(modulus)
    points: np.ndarray  # all of GF(q), enumerate order
    lagrange_at_gamma: np.ndarray  # (d+1,) over GF(q^2)

    @property
    def q(self) -> int:
        return self.sub.q

    @property
    def gamma(self) -> int:
        return self.ext.gamma

    def pi(self, a):
        """(..., s) over GF(q^2) -> (..., s*q) over GF(q)."""
        a = np.asarray(a, dtype=np.int64)
        a0, a1 = a % self.q, a // self.q
        S = self.sub
        blocks = S.add(a0[..., None], S.mul(a1[..., None], self.points))
        return blocks.reshape(a.shape[:-1] + (-1,)) if a.ndim else blocks

    def phi(self, y):
        """(..., s*q) over GF(q) -> (..., s) over GF(q^2), blockwise."""
        y = np.asarray(y, dtype=np.int64)
        blocks = y.reshape(y.shape[:-1] + (-1, self.q))
        return self.ext.matmul(blocks[..., : self.d + 1], self.lagrange_at_gamma)

    @cached_property
    def inner_gen(self) -> np.ndarray:
        """Generator of pi(GF(q^2))^{*d}: evaluations of 1, x, ..., x^d."""
        return np.stack([self.sub.pow(self.points, i) for i in range(self.d + 1)])

    @cached_property
    def inner_parity(self) -> np.ndarray:
        return linalg.nullspace(self.sub, self.inner_gen)

    def in_inner_code(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.int64)
        blocks = y.reshape(y.shape[:-1] + (-1, self.q))
        if self.inner_parity.size == 0:
            return np.ones(blocks.shape[:-1], dtype=bool)
        syn = self.sub.matmul(blocks, self.inner_parity.T)
        return ~np.any(syn != 0, axis=-1)

    @cached_property
    def inner_words(self) -> np.ndarray:
        """Every word of pi(GF(q^2))^{*d}, shape (q^(d+1), q)."""
        coeffs = np.array(list(itertools.product(range(self.q), repeat=self.d + 1)), dtype=np.int64)
        return self.sub.matmul(coeffs, self.inner_gen)

    @cached_property
    def _coset_tables(self):
        q = self.q
        if q ** q > 10 ** 6:
            raise MFPError(f"inner table would need {q}^{q} rows")
        words = self.inner_words
        labels = self.phi(words)[..., 0]
        blocks = np.array(list(itertools.product(range(q), repeat=q)), dtype=np.int64)
        dist = np.full((len(blocks), q * q), q + 1, dtype=np.int64)
        near = np.zeros((len(blocks), q * q), dtype=np.int64)
        for s in range(0, len(blocks), 4096):
            b = blocks[s:s + 4096]
            hd = (b[:, None, :] != words[None, :, :]).sum(-1)
            for a in range(q * q):
                sel = np.nonzero(labels == a)[0]
                if len(sel):
                    j = np.argmin(hd[:, sel], axis=1)
                    dist[s:s + len(b), a] = hd[np.arange(len(b)), sel[j]]
                    near[s:s + len(b), a] = sel[j]
        return dist, near

    @property
    def coset_distance(self) -> np.ndarray:
        """dist[y, a] = min Hamming distance from block y to {w in inner code : phi(w) = a}.

        Indexed by the block's base-q integer code; shape (q^q, q^2).
        """
        return self._coset_tables[0]

    def nearest_in_coset(self, y, z) -> np.ndarray:
        """For each block of y, the nearest inner word w with phi(w) equal to z's symbol."""
        near = self._coset_tables[1][self.block_code(y), np.asarray(z)]
        out = self.inner_words[near]
        return out.reshape(out.shape[:-2] + (-1,))

    def block_code(self, y) -> np.ndarray:
        """Integer code of each length-q block (first point most significant)."""
        y = np.asarray(y, dtype=np.int64)
        blocks = y.reshape(y.shape[:-1] + (-1, self.q))
        return blocks @ (self.q ** np.arange(self.q - 1, -1, -1, dtype=np.int64))

    def descriptor(self) -> dict:
        return {"d": self.d, "q": self.q}


def build_mfp(d: int, q: int) -> MFP:
    if q <= d:
        raise MFPError(f"a (d,2,q)-pair needs q > d (q={q}, d={d})")
    if d < 1:
        raise MFPError("arity must be positive")
    sub, ext = quadratic_tower(q)
    pts = np.array(sub.enumerate(), dtype=np.int64)
    nodes = pts[: d + 1]
    g = ext.gamma
    lag = np.zeros(d + 1, dtype=np.int64)
    for l in range(d + 1):
        num, den = 1, 1
        for j in range(d + 1):
            if j != l:
                num = ext.mul(num, ext.sub(g, int(nodes[j])))
                den = ext.mul(den, ext.sub(int(nodes[l]), int(nodes[j])))
        lag[l] = ext.div(num, den)
    return MFP(d, sub, ext, pts, lag)


def mfp_apply_pi(mfp: MFP, v):
    return mfp.pi(v)


def interleaved_parameters(n: int, q: int, d: int, r: int) -> dict:
    """Length, r' = dn + qr, and the two distance figures for a concatenation."""
    rp = d * n + q * r
    return {
        "length": q * n,
        "r_prime": rp,
        "distance_bound": q * n - rp + 1,
        "concatenated_distance": (n - r + 1) * (q - d),
    }


@dataclass
class InterleavedCodex:
    outer: Codex
    mfp: MFP
    pre_basis: np.ndarray  # GF(q)-basis of psi^{-1}(GF(q)^k), as GF(q^2)-words (dim1, n)

    @property
    def q(self) -> int:
        return self.mfp.q

    @property
    def n(self) -> int:
        return self.outer.n

    @property
    def k(self) -> int:
        return self.outer.k

    @property
    def t(self) -> int:
        return self.outer.t

    @property
    def d(self) -> int:
        return self.outer.d

    @property
    def length(self) -> int:
        return self.q * self.n

    @property
    def r_prime(self) -> int:
        return self.d * self.n + self.q * self.outer.r

    @property
    def dim(self) -> int:
        return len(self.pre_basis)

    @cached_property
    def gen(self) -> np.ndarray:
        """Generator of C1 over GF(q), shape (dim, q*n)."""
        return self.mfp.pi(self.pre_basis)

    @cached_property
    def gen_images(self) -> np.ndarray:
        """phi_I of each generator row, in GF(q)^k."""
        return self.outer.power(1).psi(self.pre_basis)

    def varphi(self, z, power: int | None = None):
        """psi after blockwise phi; checks that z lies in C1^{*d'}'s supercode."""
        z = np.asarray(z, dtype=np.int64)
        if not np.all(self.mfp.in_inner_code(z)):
            raise CodexError("a block is not in the inner power code")
        outer = self.mfp.phi(z)
        view = self.outer.power(self.d if power is None else power)
        if not np.all(view.contains(outer)):
            raise CodexError("blockwise phi is not in the outer power code")
        return view.psi(outer)

    def column_positions(self, j: int) -> np.ndarray:
        """Positions (i, j) for all outer coordinates i."""
        return np.arange(self.n) * self.q + j

    def descriptor(self) -> dict:
        return {"mfp": self.mfp.descriptor(), "outer": self.outer.descriptor()}


def interleave(cdx: Codex, mfp: MFP) -> InterleavedCodex:
    F2 = cdx.field
    if F2 != mfp.ext:
        raise MFPError("codex field is not the MFP's GF(q^2)")
    if cdx.d != mfp.d:
        raise MFPError(f"MFP arity {mfp.d} differs from codex d={cdx.d}")
    q = mfp.q
    # GF(q)-spanning set of C: rows g and gamma*g; keep those whose psi has zero imaginary part
    span = np.concatenate([cdx.gen, F2.mul(mfp.gamma, cdx.gen)])
    imgs = cdx.power(1).psi(span)  # (2*dim, k) over GF(q^2)
    imag = imgs // q
    coeffs = linalg.left_nullspace(mfp.sub, imag)  # GF(q)-combinations with Im(psi) = 0
    pre = np.zeros((len(coeffs), cdx.n), dtype=np.int64)
    for i, c in enumerate(coeffs):
        # sum_j c_j * span_j with c_j in GF(q) embedded in GF(q^2)
        pre[i] = F2.sum(F2.mul(c[:, None], span), axis=0)
    return InterleavedCodex(cdx, mfp, pre)


def varphi(icdx: InterleavedCodex, z, power: int | None = None):
    return icdx.varphi(z, power)


def weak_privacy_check(icdx: InterleavedCodex, samples: int = 200, seed: int = 0) -> dict:
    """Rank of (phi_I, proj_A) over C1 for single-column t-sets A; passes iff all = k + t."""
    rng = np.random.default_rng(seed)
    S = icdx.mfp.sub
    mats = []
    for _ in range(samples):
        j = int(rng.integers(icdx.q))
        rows = np.sort(rng.choice(icdx.n, icdx.t, replace=False))
        A = icdx.column_positions(j)[rows]
        mats.append(np.concatenate([icdx.gen_images, icdx.gen[:, A]], axis=1))
    ranks = linalg.batched_rank(S, np.stack(mats))
    return {"samples": samples, "min_rank": int(ranks.min()), "target": icdx.k + icdx.t,
            "passed": bool(np.all(ranks == icdx.k + icdx.t))}
