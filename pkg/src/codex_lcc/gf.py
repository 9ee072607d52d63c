"""Finite fields GF(p^e) and quadratic towers GF(q) < GF(q^2).

Elements are plain integers.  The integer ``a`` encodes the coefficient
vector of ``a`` over the prime field in base ``p`` (lowest degree first),
so ``enumerate()`` is simply ``range(q)`` with 0 first and 1 second.

A quadratic extension of an existing field ``F`` is encoded as
``a0 + |F| * a1`` for ``a0 + a1*gamma``; because ``a0`` and ``a1`` are
themselves base-``p`` digit strings, addition is always digit-wise mod ``p``
regardless of how the tower was built.  That also makes every field a
GF(p)-vector space on the digits, which :meth:`GF.matmul` exploits.

All arithmetic methods accept ints or integer numpy arrays and broadcast.
"""

from __future__ import annotations

import itertools
import numpy as np

MAX_ORDER = 1 << 16
_MUL_TABLE_LIMIT = 256
_ADD_TABLE_LIMIT = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over a field, coefficient lists lowest degree first ---------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(F: "GF", a, m):
    """Remainder of a modulo the monic polynomial m, both over field F."""
    a = _trim(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = F._sadd(a[shift + i], F._sneg(F._smul(lead, mc)))
        a = _trim(a)
    return a


def _has_root(F: "GF", poly) -> bool:
    for x in range(F.q):
        acc = 0
        for c in reversed(poly):
            acc = F._sadd(F._smul(acc, x), c)
        if acc == 0:
            return True
    return False


def is_irreducible(F: "GF", poly) -> bool:
    """Brute-force irreducibility test of a monic polynomial over F."""
    deg = len(poly) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    if _has_root(F, poly):
        return False
    if deg <= 3:
        return True
    for dd in range(2, deg // 2 + 1):
        for low in itertools.product(range(F.q), repeat=dd):
            if not _poly_mod(F, poly, list(low) + [1]):
                return False
    return True


def least_irreducible(F: "GF", degree: int) -> list[int]:
    """Lexicographically least monic irreducible of the given degree over F.

    Candidates are ordered by the integer whose base-|F| digits are the
    non-leading coefficients, i.e. comparing from the highest coefficient down.
    """
    for v in range(F.q ** degree):
        low = []
        for _ in range(degree):
            low.append(v % F.q)
            v //= F.q
        poly = low + [1]
        if is_irreducible(F, poly):
            return poly
    raise FieldError(f"no irreducible polynomial of degree {degree}")


class GF:
    """A finite field with integer-encoded elements.

    Build with :func:`field_new` (GF(p^e) over its prime field) or
    :func:`extension` (GF(q^2) over an existing GF(q)).
    """

    def __init__(self, p: int, base: "GF | None" = None, modulus=None):
        self.p = p
        self.base = base
        if base is None:
            self.modulus = [0, 1]  # prime field: x
            self.degree = 1
            self.q = p
        else:
            self.modulus = list(modulus)
            self.degree = len(self.modulus) - 1
            self.q = base.q ** self.degree
        if self.q > MAX_ORDER:
            raise FieldError(f"field order {self.q} exceeds {MAX_ORDER}")
        self.e = round(np.log(self.q) / np.log(p))
        self._pw = p ** np.arange(self.e, dtype=np.int64)
        self._build_tables()

    # -- construction ------------------------------------------------------

    def _digits_base(self, a: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            out.append(a % self.base.q)
            a //= self.base.q
        return out

    def _mul_raw(self, a: int, b: int) -> int:
        if self.base is None:
            return (a * b) % self.p
        if self.p == 2 and self.base.base is None:
            return self._clmul_mod(a, b)
        B = self.base
        da, db = self._digits_base(a), self._digits_base(b)
        prod = [0] * (2 * self.degree - 1)
        for i, x in enumerate(da):
            if x == 0:
                continue
            for j, y in enumerate(db):
                prod[i + j] = B._sadd(prod[i + j], B._smul(x, y))
        r = _poly_mod(B, prod, self.modulus)
        return sum(int(c) * B.q ** i for i, c in enumerate(r))

    def _clmul_mod(self, a: int, b: int) -> int:
        mod = sum(c << i for i, c in enumerate(self.modulus))
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> self.degree & 1:
                a ^= mod
        return r

    # scalar helpers on python ints, used while building tables
    def _sadd(self, a: int, b: int) -> int:
        if self.base is None:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._add_list[a][b]

    def _sneg(self, a: int) -> int:
        if self.base is None:
            return (-a) % self.p
        return self._neg_list[a]

    def _smul(self, a: int, b: int) -> int:
        if self.base is None:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp_list[self._log_list[a] + self._log_list[b]]

    def _build_tables(self):
        q, p = self.q, self.p
        if p == 2:
            self._add_table = None
        elif q <= _ADD_TABLE_LIMIT:
            x = np.arange(q)
            self._add_table = self._digit_add(x[:, None], x[None, :])
        else:
            self._add_table = None
        self._neg = self._digit_neg(np.arange(q))
        self._neg_list = self._neg.tolist()
        self._add_list = None if self._add_table is None else self._add_table.tolist()

        # primitive element by order test, then exp/log tables
        factors = _prime_factors(q - 1) if q > 2 else []
        for g in range(1, q):
            if all(self._pow_raw(g, (q - 1) // r) != 1 for r in factors):
                break
        self.generator = g
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        v = 1
        for i in range(q - 1):
            exp[i] = v
            log[v] = i
            v = self._mul_raw(v, g)
        exp[q - 1:] = exp[: q - 1]
        self._exp, self._log = exp, log
        self._exp_list, self._log_list = exp.tolist(), log.tolist()
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self._inv = inv
        if q <= _MUL_TABLE_LIMIT:
            x = np.arange(q)
            self._mul_table = self._logmul(x[:, None], x[None, :])
        else:
            self._mul_table = None

    def _pow_raw(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self._mul_raw(r, a)
            a = self._mul_raw(a, a)
            n >>= 1
        return r

    def _logmul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    # -- digit helpers -----------------------------------------------------

    def digits(self, a) -> np.ndarray:
        """Base-p digits of elements, shape ``a.shape + (e,)``."""
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._pw) % self.p

    def from_digits(self, d) -> np.ndarray:
        return (np.asarray(d, dtype=np.int64) % self.p) @ self._pw

    def _digit_add(self, a, b):
        return self.from_digits(self.digits(a) + self.digits(b))

    def _digit_neg(self, a):
        return self.from_digits(-self.digits(a))

    # -- arithmetic --------------------------------------------------------

    def _out(self, r):
        return int(r) if np.ndim(r) == 0 else r

    def add(self, a, b):
        if self.p == 2:
            return self._out(np.bitwise_xor(a, b))
        if self._add_table is not None:
            return self._out(self._add_table[a, b])
        return self._out(self._digit_add(a, b))

    def neg(self, a):
        if self.p == 2:
            return a
        return self._out(self._neg[a])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self._mul_table is not None:
            return self._out(self._mul_table[a, b])
        return self._out(self._logmul(a, b))

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._out(self._inv[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        if n == 0:
            return self._out(np.ones_like(a))
        r = self._exp[(self._log[a] * n) % (self.q - 1)]
        return self._out(np.where(a == 0, 0, r))

    def sum(self, a, axis=-1):
        """Field sum along an axis."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return self._out(np.bitwise_xor.reduce(a, axis=axis))
        d = self.digits(a).sum(axis=axis if axis >= 0 else axis - 1)
        return self._out(self.from_digits(d))

    def dot(self, a, b):
        return self.sum(self.mul(a, b), axis=-1)

    def matmul(self, A, B) -> np.ndarray:
        """Matrix product ``A @ B`` over the field.

        Works on base-p digits: multiplication by a fixed element is
        GF(p)-linear, so the product becomes one integer matmul (done in
        float64, exact for the sizes used here) followed by reduction mod p.
        """
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        squeeze = B.ndim == 1
        if squeeze:
            B = B[:, None]
        k, m = B.shape
        if A.shape[-1] != k:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        e, p = self.e, self.p
        if e == 1:
            lead = A.shape[:-1]
            R = A.reshape(-1, k).astype(np.float64) @ B.astype(np.float64)
            out = (np.rint(R).astype(np.int64) % p).reshape(lead + (m,))
        else:
            # Bx[l, i, j, r] = digit r of (p^i * B[l, j])
            Bx = self.digits(self.mul(self._pw[None, :, None], B[:, None, :]))
            Bx = Bx.reshape(k * e, m * e).astype(np.float64)
            lead = A.shape[:-1]
            Ad = self.digits(A).reshape(-1, k * e).astype(np.float64)
            R = np.rint(Ad @ Bx).astype(np.int64) % p
            out = (R.reshape(Ad.shape[0], m, e) @ self._pw).reshape(lead + (m,))
        return out[..., 0] if squeeze else out

    def poly_eval(self, coeffs, x):
        """Evaluate sum_i coeffs[..., i] x^i (Horner), broadcasting."""
        coeffs = np.asarray(coeffs, dtype=np.int64)
        x = np.asarray(x, dtype=np.int64)
        acc = np.zeros(np.broadcast_shapes(coeffs.shape[:-1], x.shape), dtype=np.int64)
        for i in range(coeffs.shape[-1] - 1, -1, -1):
            acc = self.add(self.mul(acc, x), coeffs[..., i])
        return self._out(acc)

    def random(self, rng: np.random.Generator, size=None):
        return rng.integers(0, self.q, size=size)

    # -- misc --------------------------------------------------------------

    def enumerate(self) -> list[int]:
        return list(range(self.q))

    def element(self, v: int) -> "FieldElement":
        return FieldElement(self, v)

    @property
    def gamma(self) -> int:
        """The adjoined root of the modulus (integer ``base.q``)."""
        if self.base is None:
            raise FieldError("prime field has no adjoined root")
        return self.base.q

    @property
    def ident(self):
        base = None if self.base is None else self.base.ident
        return (self.p, self.q, tuple(self.modulus), base)

    def __eq__(self, other):
        return isinstance(other, GF) and self.ident == other.ident

    def __hash__(self):
        return hash(self.ident)

    def __repr__(self):
        if self.base is None:
            return f"GF({self.p})"
        return f"GF({self.q}) over {self.base!r} mod {self.modulus}"

    def descriptor(self) -> dict:
        """JSON-able description enough to rebuild the field."""
        if self.base is None:
            return {"p": self.p, "e": 1}
        if self.base.base is None:
            return {"p": self.p, "e": self.degree}
        return {"ext2": self.base.descriptor()}


def prime_field(p: int) -> GF:
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    return GF(p)


_CACHE: dict = {}


def field_new(p: int, e: int = 1) -> GF:
    """GF(p^e) with the lexicographically least monic irreducible modulus."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if e < 1:
        raise FieldError("extension degree must be positive")
    if p ** e > MAX_ORDER:
        raise FieldError(f"order {p}^{e} exceeds {MAX_ORDER}")
    key = ("new", p, e)
    if key not in _CACHE:
        Fp = prime_field(p)
        _CACHE[key] = Fp if e == 1 else GF(p, Fp, least_irreducible(Fp, e))
    return _CACHE[key]


def extension(base: GF, degree: int = 2) -> GF:
    """Extension of ``base`` by the least monic irreducible of the given degree."""
    if base.q ** degree > MAX_ORDER:
        raise FieldError(f"order {base.q}^{degree} exceeds {MAX_ORDER}")
    key = ("ext", base.ident, degree)
    if key not in _CACHE:
        _CACHE[key] = GF(base.p, base, least_irreducible(base, degree))
    return _CACHE[key]


def field_of_order(q: int) -> GF:
    for p in _prime_factors(q)[:1]:
        e = round(np.log(q) / np.log(p))
        if p ** e == q:
            return field_new(p, e)
    raise FieldError(f"{q} is not a prime power")


def quadratic_tower(q: int) -> tuple[GF, GF]:
    """(GF(q), GF(q^2)) with GF(q^2) built as a quadratic extension."""
    F = field_of_order(q)
    return F, extension(F, 2)


def field_from_descriptor(desc: dict) -> GF:
    if "ext2" in desc:
        return extension(field_from_descriptor(desc["ext2"]), 2)
    return field_new(desc["p"], desc["e"])


class SubfieldEmbedding:
    """The canonical embedding GF(q) -> GF(q^2) of a quadratic tower.

    Since GF(q^2) elements are encoded as ``a0 + q*a1`` over GF(q), the
    embedding is the identity on integer codes.
    """

    def __init__(self, source: GF, target: GF):
        if target.base is None or target.base != source or target.degree != 2:
            raise FieldError(f"{target!r} is not a quadratic extension of {source!r}")
        self.source = source
        self.target = target

    def __call__(self, x):
        if isinstance(x, FieldElement):
            if x.ctx != self.source:
                raise FieldError("element not in the source field")
            return FieldElement(self.target, x.value)
        return x

    def restrict(self, y):
        """Inverse on the image; raises if some value is outside GF(q)."""
        y = np.asarray(y)
        if np.any(y >= self.source.q):
            raise FieldError("value not in the subfield")
        return self.source._out(y)

    @property
    def generator_image(self) -> int:
        # image of the source's adjoined root, or 1 for a prime source
        return self.source.gamma if self.source.base is not None else 1


def embed(x: "FieldElement", target: GF) -> "FieldElement":
    return SubfieldEmbedding(x.ctx, target)(x)


class FieldElement:
    """A field element bound to its context; arithmetic between same-field elements only."""

    __slots__ = ("ctx", "value")

    def __init__(self, ctx: GF, value: int):
        value = int(value)
        if not 0 <= value < ctx.q:
            raise FieldError(f"{value} is not an element of {ctx!r}")
        self.ctx = ctx
        self.value = value

    def _check(self, other):
        if isinstance(other, int):
            return other
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.ctx != self.ctx:
            raise FieldError(f"context mismatch: {self.ctx!r} vs {other.ctx!r}")
        return other.value

    def __add__(self, other):
        v = self._check(other)
        return FieldElement(self.ctx, self.ctx.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._check(other)
        return FieldElement(self.ctx, self.ctx.sub(self.value, v))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        v = self._check(other)
        return FieldElement(self.ctx, self.ctx.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._check(other)
        return FieldElement(self.ctx, self.ctx.div(self.value, v))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FieldElement(self.ctx, self.ctx.pow(self.value, n))

    def inverse(self):
        return FieldElement(self.ctx, self.ctx.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other
        return isinstance(other, FieldElement) and other.ctx == self.ctx and other.value == self.value

    def __hash__(self):
        return hash((self.ctx, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@{self.ctx!r}"
