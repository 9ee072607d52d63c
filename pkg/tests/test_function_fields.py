import numpy as np
import pytest

from codex_lcc import linalg
from codex_lcc.function_fields import (INFINITY, HermitianCurve, RationalCurve, eval_function, hermitian_places,
                                       rational_places, rr_basis)
from codex_lcc.gf import field_of_order


def test_rational_places_counts():
    F7 = field_of_order(7)
    assert len(rational_places(F7, exclude={0})) == 6
    assert len(rational_places(field_of_order(5))) == 5
    assert rational_places(F7, exclude=set(range(7))) == []


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_hermitian_place_count_and_equation(q):
    places = hermitian_places(q)
    assert len(places) == q ** 3
    F = HermitianCurve(q).field
    for P in places:
        a, b = P.coords
        assert F.add(F.pow(b, q), b) == F.pow(a, q + 1)


def test_hermitian_places_match_brute_force_over_gf9():
    F = HermitianCurve(3).field
    brute = sorted((a, b) for a in range(9) for b in range(9) if F.add(F.pow(b, 3), b) == F.pow(a, 4))
    assert sorted(P.coords for P in hermitian_places(3)) == brute


def test_rational_basis():
    B = rr_basis(RationalCurve(field_of_order(7)), 1)
    assert B.dim == 2


def test_hermitian_basis_sizes():
    assert sorted(rr_basis(HermitianCurve(3), 7).monomials) == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0)]
    assert rr_basis(HermitianCurve(4), 11).dim == 11 + 1 - 6


@pytest.mark.parametrize("q", [3, 4])
def test_riemann_roch_dimension_above_2g_minus_1(q):
    g = q * (q - 1) // 2
    for s in range(2 * g - 1, 2 * g + 15):
        assert rr_basis(HermitianCurve(q), s).dim == s + 1 - g


@pytest.mark.parametrize("q", [3, 4])
def test_gap_structure(q):
    dims = [rr_basis(HermitianCurve(q), s).dim for s in range(0, 3 * q * q)]
    assert all(b - a in (0, 1) for a, b in zip(dims, dims[1:]))


@pytest.mark.parametrize("q", [3, 4])
def test_evaluation_is_injective_below_n(q):
    curve = HermitianCurve(q)
    places = hermitian_places(q)
    for s in (q * q, q ** 3 - 1 - q * (q - 1) // 2, q ** 3 - 1):
        M = rr_basis(curve, s).eval_matrix(places)
        assert linalg.rank(curve.field, M) == M.shape[0]


def test_eval_function_examples():
    curve = HermitianCurve(3)
    F = curve.field
    P = hermitian_places(3)[7]
    a, b = P.coords
    assert eval_function(curve, (1, 1), P) == F.mul(a, b)
    assert eval_function(curve, (0, 0), P) == 1
    R = RationalCurve(field_of_order(7))
    P3 = [p for p in rational_places(field_of_order(7)) if p.coords[0] == 3][0]
    assert eval_function(R, (2, 0), P3) == 2


def test_infinity_cannot_be_evaluated():
    with pytest.raises(ValueError):
        eval_function(HermitianCurve(3), (0, 0), INFINITY)
