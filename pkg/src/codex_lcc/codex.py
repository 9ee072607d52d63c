"""Codices from one-point algebraic-geometry codes.

A codex here is C = {(f(P_1), ..., f(P_n)) : f in L(G)} with G = s*inf,
s = 2g + k + t - 1, together with psi(c_f) = (f(Q_1), ..., f(Q_k)).  Words
of C^{*d'} lie in C(d'G, P); psi extends to them by solving for the unique
h in L(d'G) and evaluating h at Q.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .function_fields import (
    HermitianCurve,
    RationalCurve,
    RRBasis,
    curve_from_descriptor,
    rr_basis,
)
from .gf import GF


class CodexError(ValueError):
    pass


PRIVACY_ENUM_LIMIT = 10_000
PRIVACY_SAMPLES = 200


@dataclass
class PowerCodeView:
    """The supercode C(d'G, P) that contains C^{*d'}."""

    codex: "Codex"
    power: int
    basis: RRBasis
    gen: np.ndarray  # (dim, n)
    parity: np.ndarray  # (n - dim, n)
    info: np.ndarray  # information set, len dim
    psi_mat: np.ndarray  # (n, k), supported on info

    @property
    def degree(self) -> int:
        return self.power * self.codex.deg_G

    @property
    def dim(self) -> int:
        return self.gen.shape[0]

    @property
    def designed_distance(self) -> int:
        return self.codex.n - self.degree

    def contains(self, z) -> np.ndarray | bool:
        F = self.codex.field
        syn = F.matmul(np.asarray(z), self.parity.T)
        out = ~np.any(syn != 0, axis=-1)
        return bool(out) if np.ndim(out) == 0 else out

    def psi(self, z):
        return self.codex.field.matmul(np.asarray(z), self.psi_mat)

    def encode(self, h):
        return self.codex.field.matmul(np.asarray(h), self.gen)


@dataclass
class Codex:
    curve: object
    k: int
    t: int
    d: int
    r: int
    deg_G: int
    Q: list
    P: list
    q_index: list
    p_index: list
    basis: RRBasis
    gen: np.ndarray  # (dim, n)
    eval_Q: np.ndarray  # (dim, k)
    section: np.ndarray | None  # (k, n): target -> particular codeword
    kernel: np.ndarray  # (dim - k, n): basis of ker(psi)
    _powers: dict = field(default_factory=dict, repr=False)

    @property
    def field(self) -> GF:
        return self.curve.field

    @property
    def n(self) -> int:
        return len(self.P)

    @property
    def dim(self) -> int:
        return self.gen.shape[0]

    @property
    def genus(self) -> int:
        return self.curve.genus

    @property
    def decoder(self) -> str:
        return "rs" if isinstance(self.curve, RationalCurve) else "hermitian"

    def power(self, dp: int | None = None) -> PowerCodeView:
        dp = self.d if dp is None else dp
        if dp not in self._powers:
            self._powers[dp] = _power_view(self, dp)
        return self._powers[dp]

    @cached_property
    def ones(self) -> np.ndarray:
        return np.ones(self.n, dtype=np.int64)

    def psi(self, z):
        """psi on C^{*d'} for any d' <= d (via the C(dG, P) supercode)."""
        view = self.power(self.d)
        if not np.all(view.contains(z)):
            raise CodexError("word not in the supercode C(dG, P)")
        return view.psi(z)

    def encode(self, coeffs):
        return self.field.matmul(np.asarray(coeffs), self.gen)

    def sample_with_image(self, target, rng: np.random.Generator):
        """Uniform codeword(s) c with psi(c) = target; target may be (..., k)."""
        if self.section is None:
            raise CodexError("psi is not surjective; no section available")
        F = self.field
        target = np.asarray(target, dtype=np.int64)
        u = rng.integers(0, F.q, size=target.shape[:-1] + (self.kernel.shape[0],))
        return self.field.matmul(np.concatenate([target, u], axis=-1), self._affine)

    @cached_property
    def _affine(self) -> np.ndarray:
        return np.vstack([self.section, self.kernel])

    def descriptor(self) -> dict:
        return {
            **self.curve.descriptor(),
            "k": self.k,
            "t": self.t,
            "d": self.d,
            "r": self.r,
            "n": self.n,
            "deg_G": self.deg_G,
            "Q": list(self.q_index),
            "P": list(self.p_index),
        }


def build_codex(curve, k: int, t: int, d: int, r: int, n: int | None = None) -> Codex:
    """The codex of C(G; P) with deg G = 2g + k + t - 1 and psi = evaluation at Q.

    Q is taken first from the curve's deterministic place order, then P.
    """
    if min(k, t, d, r) < 1:
        raise CodexError("k, t, d, r must be positive")
    places = curve.places()
    if n is None:
        n = len(places) - k
    if k + n > len(places):
        raise CodexError(f"need {k + n} places, curve has {len(places)}")
    deg_G = 2 * curve.genus + k + t - 1
    if not r <= n:
        raise CodexError(f"n >= r violated (n={n}, r={r})")
    if not r > d * deg_G:
        raise CodexError(f"r > d(2g+k+t-1) violated ({r} <= {d}*{deg_G})")
    q_index = list(range(k))
    p_index = list(range(k, k + n))
    return assemble_codex(curve, rr_basis(curve, deg_G), q_index, p_index, k, t, d, r, deg_G)


def assemble_codex(curve, basis: RRBasis, q_index, p_index, k, t, d, r, deg_G) -> Codex:
    """Codex data for an explicit basis; no parameter checks (used for controls too)."""
    F = curve.field
    places = curve.places()
    Q = [places[i] for i in q_index]
    P = [places[i] for i in p_index]
    gen = basis.eval_matrix(P)
    eval_Q = basis.eval_matrix(Q)
    X = linalg.solve(F, eval_Q.T, np.eye(k, dtype=np.int64)) if basis.dim else None
    section = None if X is None else F.matmul(X.T, gen)
    kc = linalg.left_nullspace(F, eval_Q) if basis.dim else np.zeros((0, 0), dtype=np.int64)
    kernel = F.matmul(kc, gen) if kc.size else np.zeros((0, len(P)), dtype=np.int64)
    return Codex(curve, k, t, d, r, deg_G, Q, P, list(q_index), list(p_index),
                 basis, gen, eval_Q, section, kernel)


def codex_from_descriptor(desc: dict) -> Codex:
    curve = curve_from_descriptor(desc)
    cdx = build_codex(curve, desc["k"], desc["t"], desc["d"], desc["r"], desc["n"])
    if cdx.q_index != desc["Q"] or cdx.p_index != desc["P"]:
        raise CodexError("descriptor place indices do not match the deterministic order")
    return cdx


def _power_view(cdx: Codex, dp: int) -> PowerCodeView:
    F = cdx.field
    basis = rr_basis(cdx.curve, dp * cdx.deg_G)
    gen = basis.eval_matrix(cdx.P)
    if basis.dim >= cdx.n:
        raise CodexError(f"L({dp}G) does not embed injectively into F^{cdx.n}")
    _, piv, rk = linalg.rref(F, gen)
    if rk != basis.dim:
        raise CodexError("evaluation map on L(d'G) is not injective")
    info = np.array(piv, dtype=np.int64)
    sub_inv = linalg.inverse(F, gen[:, info])
    eq = basis.eval_matrix(cdx.Q)
    psi_mat = np.zeros((cdx.n, cdx.k), dtype=np.int64)
    psi_mat[info] = F.matmul(sub_inv, eq)
    parity = linalg.nullspace(F, gen)
    return PowerCodeView(cdx, dp, basis, gen, parity, info, psi_mat)


def psi(cdx: Codex, word):
    return cdx.psi(word)


def sample_with_image(cdx: Codex, target, seed) -> np.ndarray:
    return cdx.sample_with_image(target, np.random.default_rng(seed))


def star_product(F: GF, words) -> np.ndarray:
    """Coordinatewise product of a list of equal-length words."""
    words = [np.asarray(w, dtype=np.int64) for w in words]
    if not words:
        raise ValueError("empty product")
    n = words[0].shape[-1]
    if any(w.shape[-1] != n for w in words):
        raise ValueError("length mismatch in star product")
    out = words[0]
    for w in words[1:]:
        out = F.mul(out, w)
    return out


def privacy_sets(n: int, t: int, rng: np.random.Generator) -> list[tuple]:
    """All t-subsets of range(n) when few enough, else PRIVACY_SAMPLES random ones."""
    if math.comb(n, t) <= PRIVACY_ENUM_LIMIT:
        return list(itertools.combinations(range(n), t))
    return [tuple(sorted(rng.choice(n, size=t, replace=False))) for _ in range(PRIVACY_SAMPLES)]


@dataclass
class AuditReport:
    clauses: dict
    details: dict

    @property
    def passed(self) -> bool:
        return all(self.clauses.values())

    def to_dict(self) -> dict:
        return {"passed": self.passed, "clauses": dict(self.clauses), "details": self.details}


def audit_codex(cdx: Codex, trials: int = 100, seed: int = 0) -> AuditReport:
    """Check the codex axioms: unital, surjective psi, t-privacy, multiplicativity, distance."""
    F = cdx.field
    rng = np.random.default_rng(seed)
    clauses, details = {}, {}

    rk_q = linalg.rank(F, cdx.eval_Q) if cdx.dim else 0
    clauses["surjective"] = rk_q == cdx.k
    details["psi_rank"] = rk_q

    one_in = cdx.dim > 0 and linalg.in_rowspace(F, cdx.gen, cdx.ones)
    unital = bool(one_in)
    if unital:
        try:
            unital = bool(np.all(cdx.psi(cdx.ones) == 1))
        except CodexError:
            unital = False
    clauses["unital"] = unital

    sets = privacy_sets(cdx.n, cdx.t, rng)
    if cdx.dim:
        stack = np.stack([np.concatenate([cdx.eval_Q, cdx.gen[:, list(A)]], axis=1) for A in sets])
        ranks = linalg.batched_rank(F, stack)
    else:
        ranks = np.zeros(len(sets), dtype=np.int64)
    clauses["t_privacy"] = bool(np.all(ranks == cdx.k + cdx.t))
    details["privacy_sets_checked"] = len(sets)

    mult_ok = clauses["surjective"] and unital
    if mult_ok:
        coeffs = rng.integers(0, F.q, size=(trials, cdx.d, cdx.dim))
        words = cdx.encode(coeffs)  # (trials, d, n)
        prod = star_product(F, [words[:, i] for i in range(cdx.d)])
        lhs = cdx.power(cdx.d).psi(prod)
        imgs = cdx.power(1).psi(words)  # (trials, d, k)
        rhs = star_product(F, [imgs[:, i] for i in range(cdx.d)])
        mult_ok = bool(np.all(lhs == rhs)) and bool(np.all(cdx.power(cdx.d).contains(prod)))
    clauses["multiplicativity"] = mult_ok
    details["multiplicativity_trials"] = trials

    clauses["distance"] = cdx.d * cdx.deg_G < cdx.r <= cdx.n
    details["power_designed_distance"] = cdx.n - cdx.d * cdx.deg_G
    details["n_minus_r_plus_1"] = cdx.n - cdx.r + 1
    return AuditReport(clauses, details)


def rational_codex(q: int, k: int, t: int, d: int, r: int, n: int | None = None) -> Codex:
    from .gf import field_of_order

    return build_codex(RationalCurve(field_of_order(q)), k, t, d, r, n)


def hermitian_codex(q: int, k: int, t: int, d: int, r: int, n: int | None = None) -> Codex:
    return build_codex(HermitianCurve(q), k, t, d, r, n)
