"""Reed-Muller codewords as evaluation oracles, plus a corruption channel.

Words of RM(q, d, m) have length q^m, which is far too long to store for the
parameters of interest (q = 256, m = 8).  A codeword is therefore represented
by its polynomial and evaluated on demand; the received word is an oracle that
adds a hidden error vector on top.
"""

from __future__ import annotations

import csv
import itertools
import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .gf import GF, field_of_order


class RMError(ValueError):
    pass


def rm_dimension(q: int, d: int, m: int) -> int:
    if d >= q:
        raise RMError(f"degree {d} must be below the field size {q}")
    return math.comb(m + d, d)


def monomial_exponents(m: int, d: int) -> np.ndarray:
    """All exponent vectors of total degree <= d, shape (binom(m+d, d), m)."""
    out = [e for tot in range(d + 1) for e in _compositions(tot, m)]
    return np.array(out, dtype=np.int64).reshape(-1, m)


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class MultiPoly:
    """f = sum_I a_I x^I with only nonzero coefficients stored."""

    field: GF
    m: int
    d: int
    exps: np.ndarray  # (T, m)
    coefs: np.ndarray  # (T,)

    def __post_init__(self):
        self.exps = np.asarray(self.exps, dtype=np.int64).reshape(-1, self.m)
        self.coefs = np.asarray(self.coefs, dtype=np.int64).reshape(-1)
        if len(self.exps) != len(self.coefs):
            raise RMError("exponent/coefficient count mismatch")
        if len(self.exps) and (self.exps.sum(axis=1).max() > self.d or self.exps.max() > self.field.q - 1):
            raise RMError("monomial outside RM(q, d, m)")
        keep = self.coefs != 0
        self.exps, self.coefs = self.exps[keep], self.coefs[keep]

    @property
    def nterms(self) -> int:
        return len(self.coefs)

    @property
    def degree(self) -> int:
        return int(self.exps.sum(axis=1).max()) if self.nterms else -1

    def __call__(self, points) -> np.ndarray | int:
        return rm_eval(self, points)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if other.field != self.field or other.m != self.m:
            raise RMError("adding polynomials over different spaces")
        acc: dict = {}
        F = self.field
        for e, c in itertools.chain(zip(map(tuple, self.exps), self.coefs),
                                    zip(map(tuple, other.exps), other.coefs)):
            acc[e] = F.add(acc.get(e, 0), int(c))
        keys = list(acc)
        return MultiPoly(F, self.m, max(self.d, other.d),
                         np.array(keys, dtype=np.int64).reshape(-1, self.m), [acc[k] for k in keys])

    def to_dict(self) -> dict:
        return {"q": self.field.q, "m": self.m, "d": self.d,
                "terms": [[list(map(int, e)), int(c)] for e, c in zip(self.exps, self.coefs)]}


EVAL_CHUNK = 1 << 16


def rm_eval(f: MultiPoly, points) -> np.ndarray | int:
    """Evaluate f at points of shape (..., m).

    Works in the log domain: a term c*x^I is exp(log c + I.log x), or 0 when
    some variable with positive exponent is 0.
    """
    F = f.field
    pts = np.asarray(points, dtype=np.int64)
    if pts.shape[-1:] != (f.m,):
        raise RMError(f"point dimension {pts.shape[-1:]} does not match m={f.m}")
    lead = pts.shape[:-1]
    flat = pts.reshape(-1, f.m)
    out = np.zeros(len(flat), dtype=np.int64)
    if f.nterms:
        pos = (f.exps > 0).astype(np.float64).T
        E = f.exps.T.astype(np.float64)
        logc = F._log[f.coefs]
        order = F.q - 1
        for s in range(0, len(flat), EVAL_CHUNK):
            X = flat[s:s + EVAL_CHUNK]
            L = F._log[X].astype(np.float64) @ E  # exact: entries < 2^53
            zero = (X == 0).astype(np.float64) @ pos > 0
            L = (L.astype(np.int64) + logc[None, :]) % order
            vals = np.where(zero, 0, F._exp[L])
            out[s:s + EVAL_CHUNK] = F.sum(vals, axis=1)
    out = out.reshape(lead)
    return int(out) if out.ndim == 0 else out


def rm_random_poly(q: int, d: int, m: int, seed, F: GF | None = None) -> MultiPoly:
    """Uniform message: every coefficient of RM(q, d, m) drawn i.i.d. from F_q."""
    rm_dimension(q, d, m)
    F = F or field_of_order(q)
    rng = np.random.default_rng(seed)
    exps = monomial_exponents(m, d)
    return MultiPoly(F, m, d, exps, rng.integers(0, q, size=len(exps)))


def rm_sparse_poly(q: int, d: int, m: int, seed, terms: int = 32, F: GF | None = None) -> MultiPoly:
    """Random polynomial of exact total degree d with a handful of monomials.

    For RM(256, 50, 8) the dense message has ~10^9 coefficients; local
    decoding never looks at them, so experiments there use this sampler.
    """
    rm_dimension(q, d, m)
    F = F or field_of_order(q)
    rng = np.random.default_rng(seed)
    rows = {tuple(_random_exponent(rng, m, d))}  # one full-degree term
    while len(rows) < terms:
        rows.add(tuple(_random_exponent(rng, m, int(rng.integers(0, d + 1)))))
    exps = np.array(sorted(rows), dtype=np.int64)
    coefs = rng.integers(1, q, size=len(exps))
    return MultiPoly(F, m, d, exps, coefs)


def _random_exponent(rng, m: int, total: int) -> np.ndarray:
    # stars and bars: uniform over compositions of `total` into m parts
    bars = np.sort(rng.choice(total + m - 1, size=m - 1, replace=False)) if m > 1 else np.array([], int)
    edges = np.concatenate([[-1], bars, [total + m - 1]])
    return np.diff(edges) - 1


# -- points -----------------------------------------------------------------

def point_index(points, q: int) -> np.ndarray:
    """Lexicographic index of points (first coordinate most significant)."""
    pts = np.asarray(points, dtype=np.int64)
    m = pts.shape[-1]
    if q ** m >= 2 ** 63:
        raise RMError("point index does not fit in 64 bits")
    return pts @ (q ** np.arange(m - 1, -1, -1, dtype=np.int64))


def index_point(idx, q: int, m: int) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64)
    out = np.empty(idx.shape + (m,), dtype=np.int64)
    for i in range(m - 1, -1, -1):
        out[..., i] = idx % q
        idx = idx // q
    return out


def all_points(q: int, m: int) -> np.ndarray:
    return index_point(np.arange(q ** m), q, m)


# -- keyed hashing for the PRF error model ----------------------------------

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GOLD = np.uint64(0x9E3779B97F4A7C15)


def _mix(x: np.ndarray) -> np.ndarray:
    x = x ^ (x >> np.uint64(30))
    x = x * _M1
    x = x ^ (x >> np.uint64(27))
    x = x * _M2
    return x ^ (x >> np.uint64(31))


def point_hash(points, seed: int, salt: int = 0) -> np.ndarray:
    """64-bit keyed hash of each point (splitmix64 chained over coordinates)."""
    pts = np.asarray(points, dtype=np.int64).astype(np.uint64)
    with np.errstate(over="ignore"):
        h = _mix(np.full(pts.shape[:-1], np.uint64(seed % 2**64) ^ np.uint64(salt), dtype=np.uint64) + _GOLD)
        for i in range(pts.shape[-1]):
            h = _mix(h ^ (pts[..., i] + _GOLD * np.uint64(i + 1)))
    return h


# -- the corrupted word -----------------------------------------------------

ERROR_MODELS = ("none", "exact", "prf", "file")
EXACT_LIMIT = 10 ** 8


@dataclass
class CorruptedWordOracle:
    """Point-addressable access to a_f + b without materializing either.

    ``exact``: |E| = floor(delta q^m) positions drawn without replacement.
    ``prf``:   u in E iff a keyed hash of u falls below delta.
    ``file``:  explicit (point, value) overrides, see :func:`load_adversarial_csv`.
    """

    f: MultiPoly
    delta: float = 0.0
    model: str = "prf"
    seed: int = 0
    overrides: dict | None = None
    queries: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.model not in ERROR_MODELS:
            raise RMError(f"unknown error model {self.model!r}; choose from {ERROR_MODELS}")
        if not 0 <= self.delta < 1:
            raise RMError("delta must lie in [0, 1)")
        F = self.f.field
        self.N = F.q ** self.f.m
        self._exact_idx = self._exact_off = None
        if self.model == "exact":
            if self.N > EXACT_LIMIT:
                raise RMError(f"exact error sets need q^m <= {EXACT_LIMIT}")
            rng = np.random.default_rng([self.seed, 0xE])
            size = math.floor(self.delta * self.N)
            idx = np.sort(rng.choice(self.N, size=size, replace=False))
            self._exact_idx = idx
            self._exact_off = rng.integers(1, F.q, size=size)
        if self.model == "file":
            self._file = {}
            for pt, val in (self.overrides or {}).items():
                if len(pt) != self.f.m:
                    raise RMError(f"override point {pt} has wrong dimension")
                if not 0 <= int(val) < F.q:
                    raise RMError(f"override value {val} is not an element of GF({F.q})")
                self._file[tuple(int(x) for x in pt)] = int(val)

    @property
    def field(self) -> GF:
        return self.f.field

    @property
    def m(self) -> int:
        return self.f.m

    def error_size(self) -> int | None:
        if self.model == "exact":
            return len(self._exact_idx)
        if self.model == "none":
            return 0
        if self.model == "file":
            return len(self._file)
        return None

    def error_offsets(self, points) -> np.ndarray:
        """b at the given points (0 off the error set)."""
        F = self.field
        pts = np.asarray(points, dtype=np.int64)
        shape = pts.shape[:-1]
        if self.model == "none" or (self.delta == 0 and self.model in ("exact", "prf")):
            return np.zeros(shape, dtype=np.int64)
        if self.model == "exact":
            idx = point_index(pts, F.q)
            pos = np.searchsorted(self._exact_idx, idx)
            pos_c = np.minimum(pos, max(len(self._exact_idx) - 1, 0))
            hit = (pos < len(self._exact_idx)) & (self._exact_idx[pos_c] == idx) if len(self._exact_idx) else np.zeros(shape, bool)
            return np.where(hit, self._exact_off[pos_c] if len(self._exact_idx) else 0, 0)
        if self.model == "prf":
            h = point_hash(pts, self.seed, 0xE)
            u = (h >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
            h2 = point_hash(pts, self.seed, 0xB)
            off = (h2 % np.uint64(F.q - 1)).astype(np.int64) + 1
            return np.where(u < self.delta, off, 0)
        # file: overrides replace the value, so the offset is value - f(u)
        out = np.zeros(shape, dtype=np.int64)
        if not self._file:
            return out
        flat = pts.reshape(-1, self.m)
        hits = [(i, self._file[tuple(p)]) for i, p in enumerate(flat.tolist()) if tuple(p) in self._file]
        if hits:
            ii = np.array([h[0] for h in hits])
            vals = np.array([h[1] for h in hits])
            o = out.reshape(-1)
            o[ii] = F.sub(vals, rm_eval(self.f, flat[ii]))
        return out

    def corrupted(self, points) -> np.ndarray:
        return self.error_offsets(points) != 0

    def peek(self, points) -> np.ndarray:
        """Received values without touching the query counter."""
        F = self.field
        return F.add(np.asarray(rm_eval(self.f, points)), self.error_offsets(points))

    def query(self, points) -> np.ndarray | int:
        """Received values at points (..., m); each point counts as one query."""
        pts = np.asarray(points, dtype=np.int64)
        n = int(np.prod(pts.shape[:-1], dtype=np.int64))
        with self._lock:
            self.queries += n
        out = self.peek(pts)
        return int(out) if np.ndim(out) == 0 else out

    def reset_counter(self) -> int:
        with self._lock:
            n, self.queries = self.queries, 0
        return n


def oracle_query(o: CorruptedWordOracle, u) -> int:
    return o.query(u)


def load_adversarial_csv(path, m: int | None = None) -> dict:
    """Read corruption overrides: header u_1,...,u_m,value; one row per point."""
    out = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        cols = [c for c in (reader.fieldnames or []) if c.startswith("u_")]
        cols.sort(key=lambda c: int(c[2:]))
        if "value" not in (reader.fieldnames or []) or not cols:
            raise RMError("adversarial file needs columns u_1..u_m,value")
        if m is not None and len(cols) != m:
            raise RMError(f"adversarial file has {len(cols)} coordinates, expected {m}")
        for row in reader:
            out[tuple(int(row[c]) for c in cols)] = int(row["value"])
    return out


def write_adversarial_csv(path, overrides: dict) -> None:
    if not overrides:
        raise RMError("nothing to write")
    m = len(next(iter(overrides)))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"u_{i + 1}" for i in range(m)] + ["value"])
        for pt, v in overrides.items():
            w.writerow(list(pt) + [v])
