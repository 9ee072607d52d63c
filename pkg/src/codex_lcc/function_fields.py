"""Rational places and one-point Riemann-Roch bases.

Two function fields are executable:

* the rational field F(x): places are field elements, L(s*inf) = {1, x, ..., x^s};
* the Hermitian field over GF(q^2), y^q + y = x^(q+1), genus q(q-1)/2: finite
  places are the affine points (a, b), and L(s*inf) has the monomial basis
  x^i y^j with j <= q-1 and q*i + (q+1)*j <= s.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .gf import GF, quadratic_tower


@dataclass(frozen=True)
class Place:
    kind: str  # "rational" | "hermitian" | "infinity"
    coords: tuple = ()

    @property
    def is_finite(self) -> bool:
        return self.kind != "infinity"


INFINITY = Place("infinity")


class RationalCurve:
    name = "rational"
    genus = 0

    def __init__(self, F: GF):
        self.field = F

    def places(self, exclude: Iterable[int] = ()) -> list[Place]:
        return rational_places(self.field, exclude)

    def monomials(self, s: int) -> list[tuple[int, int]]:
        return [(i, 0) for i in range(s + 1)] if s >= 0 else []

    def pole_order(self, mono) -> int:
        return mono[0]

    def point_array(self, places) -> np.ndarray:
        return np.array([[P.coords[0], 0] for P in places], dtype=np.int64).reshape(-1, 2)

    def descriptor(self) -> dict:
        return {"curve": "rational", "field": self.field.descriptor()}


class HermitianCurve:
    name = "hermitian"

    def __init__(self, q: int):
        self.q = q
        self.subfield, self.field = quadratic_tower(q)
        self.genus = q * (q - 1) // 2

    def places(self) -> list[Place]:
        return hermitian_places(self.q)

    def monomials(self, s: int) -> list[tuple[int, int]]:
        q = self.q
        out = [(i, j) for j in range(q) for i in range(s // q + 1) if q * i + (q + 1) * j <= s]
        return sorted(out, key=self.pole_order)

    def pole_order(self, mono) -> int:
        i, j = mono
        return self.q * i + (self.q + 1) * j

    def point_array(self, places) -> np.ndarray:
        return np.array([P.coords for P in places], dtype=np.int64).reshape(-1, 2)

    def descriptor(self) -> dict:
        return {"curve": "hermitian", "q": self.q}


def curve_from_descriptor(desc: dict):
    from .gf import field_from_descriptor

    if desc["curve"] == "hermitian":
        return HermitianCurve(desc["q"])
    return RationalCurve(field_from_descriptor(desc["field"]))


def rational_places(F: GF, exclude: Iterable[int] = ()) -> list[Place]:
    ex = set(int(x) for x in exclude)
    return [Place("rational", (a,)) for a in F.enumerate() if a not in ex]


def hermitian_places(q: int) -> list[Place]:
    """All q^3 finite places (a, b) of y^q + y = x^(q+1), lexicographic order."""
    return list(_hermitian_places(q))


@lru_cache(maxsize=None)
def _hermitian_places(q: int) -> tuple:
    _, F = quadratic_tower(q)
    x = np.arange(F.q)
    lhs = F.add(F.pow(x, q), x)  # b^q + b, indexed by b
    rhs = F.pow(x, q + 1)  # a^(q+1), indexed by a
    a_idx, b_idx = np.nonzero(rhs[:, None] == lhs[None, :])
    return tuple(Place("hermitian", (int(a), int(b))) for a, b in zip(a_idx, b_idx))


@dataclass
class RRBasis:
    """Ordered monomial basis of L(s*inf)."""

    curve: object
    s: int
    monomials: list

    def __len__(self):
        return len(self.monomials)

    @property
    def dim(self) -> int:
        return len(self.monomials)

    def eval_matrix(self, places) -> np.ndarray:
        """Values of each basis function at each place, shape (dim, len(places))."""
        if any(not P.is_finite for P in places):
            raise ValueError("cannot evaluate at the place at infinity")
        F = self.curve.field
        pts = self.curve.point_array(places)
        if not self.monomials:
            return np.zeros((0, len(places)), dtype=np.int64)
        ei = np.array([m[0] for m in self.monomials])
        ej = np.array([m[1] for m in self.monomials])
        xs = _powers(F, pts[:, 0], ei.max())
        ys = _powers(F, pts[:, 1], ej.max())
        return F.mul(xs[ei], ys[ej])


def _powers(F: GF, x, top: int) -> np.ndarray:
    out = np.ones((top + 1, len(x)), dtype=np.int64)
    for k in range(1, top + 1):
        out[k] = F.mul(out[k - 1], x)
    return out


def rr_basis(curve, s: int) -> RRBasis:
    if s < 0:
        raise ValueError("divisor degree must be non-negative")
    return RRBasis(curve, s, curve.monomials(s))


def eval_function(curve, mono, place: Place) -> int:
    """Value of the basis monomial x^i y^j at a finite place."""
    if not place.is_finite:
        raise ValueError("cannot evaluate at the place at infinity")
    return int(RRBasis(curve, 0, [tuple(mono)]).eval_matrix([place])[0, 0])
