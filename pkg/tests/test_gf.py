import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codex_lcc.gf import (FieldElement, FieldError, SubfieldEmbedding, embed, extension, field_from_descriptor,
                          field_new, field_of_order, is_irreducible, quadratic_tower)

SMALL = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
UP_TO_256 = [q for q in range(2, 257) if len({p for p in range(2, q + 1) if q % p == 0 and
                                              all(p % r for r in range(2, p))}) == 1]


def test_gf4_modulus_is_x2_x_1():
    assert field_new(2, 2).modulus == [1, 1, 1]


def test_gf9_modulus_is_x2_plus_1():
    assert field_new(3, 2).modulus == [1, 0, 1]


def test_gf9_modulus_is_least_irreducible_by_enumeration():
    F3 = field_new(3)
    monic = [[c0, c1, 1] for c1 in range(3) for c0 in range(3)]
    first = next(p for p in sorted(monic, key=lambda p: (p[1], p[0])) if is_irreducible(F3, p))
    # lexicographic order on (x^1, x^0) coefficients puts x^2 + 1 first
    assert first == [1, 0, 1]
    roots = [x for x in range(3) if (x * x + 1) % 3 == 0]
    assert roots == []


def test_composite_characteristic_rejected():
    with pytest.raises(FieldError):
        field_new(4, 1)


def test_order_overflow_rejected():
    with pytest.raises(FieldError):
        field_new(2, 17)


def test_gf4_omega_squared():
    F = field_new(2, 2)
    w = 2
    assert F.mul(w, w) == 3


def test_gf9_gamma_squared_is_two():
    F = field_new(3, 2)
    assert F.mul(3, 3) == 2


def test_inverse_examples():
    assert field_new(7).inv(3) == 5
    assert field_new(2, 2).inv(2) == 3
    with pytest.raises(ZeroDivisionError):
        field_new(7).inv(0)


def test_enumerate_order():
    assert field_new(2, 2).enumerate() == [0, 1, 2, 3]
    assert field_new(3).enumerate() == [0, 1, 2]
    for q in SMALL:
        els = field_of_order(q).enumerate()
        assert len(els) == q and els[:2] == [0, 1]


@pytest.mark.parametrize("q", SMALL)
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    a, b, c = (x.ravel() for x in np.meshgrid(*(np.arange(q),) * 3, indexing="ij"))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.add(F.add(a, b), c), F.add(a, F.add(b, c)))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    x = np.arange(1, q)
    assert np.all(F.mul(x, F.inv(x)) == 1)
    assert np.all(F.add(x, F.neg(x)) == 0)


@pytest.mark.parametrize("q", UP_TO_256)
def test_frobenius_fixes_every_element(q):
    F = field_of_order(q)
    x = np.arange(q)
    assert np.array_equal(F.pow(x, q), x)


@pytest.mark.parametrize("q", SMALL)
def test_embedding_is_ring_homomorphism(q):
    S, E = quadratic_tower(q)
    emb = SubfieldEmbedding(S, E)
    a, b = (x.ravel() for x in np.meshgrid(np.arange(q), np.arange(q), indexing="ij"))
    assert np.array_equal(E.add(emb(a), emb(b)), emb(S.add(a, b)))
    assert np.array_equal(E.mul(emb(a), emb(b)), emb(S.mul(a, b)))
    assert emb(1) == 1
    assert len(set(emb(np.arange(q)).tolist())) == q


def test_embed_gf3_into_gf9():
    S, E = quadratic_tower(3)
    assert int(embed(FieldElement(S, 2), E)) == 2
    assert int(embed(FieldElement(S, 1), E)) == 1
    for x, y in itertools.product(range(3), repeat=2):
        lhs = embed(FieldElement(S, x) + FieldElement(S, y), E)
        assert lhs == embed(FieldElement(S, x), E) + embed(FieldElement(S, y), E)


def test_embedding_requires_registered_pair():
    with pytest.raises(FieldError):
        SubfieldEmbedding(field_new(3), field_new(5))


def test_element_context_mismatch():
    with pytest.raises(FieldError):
        FieldElement(field_new(5), 1) * FieldElement(field_new(7), 1)


def test_descriptor_round_trip():
    for F in [field_new(2, 8), extension(field_new(2, 2), 2), field_new(13)]:
        assert field_from_descriptor(F.descriptor()) == F


@settings(max_examples=60, deadline=None)
@given(q=st.sampled_from([16, 49, 64, 81, 125, 256, 1024]), seed=st.integers(0, 2 ** 32 - 1))
def test_matmul_matches_elementwise_sum(q, seed):
    F = field_of_order(q)
    rng = np.random.default_rng(seed)
    A = rng.integers(0, q, (3, 5))
    B = rng.integers(0, q, (5, 4))
    ref = np.array([[F.sum(F.mul(A[i], B[:, j])) for j in range(4)] for i in range(3)])
    assert np.array_equal(F.matmul(A, B), ref)


@settings(max_examples=50, deadline=None)
@given(q=st.sampled_from(UP_TO_256), a=st.integers(1, 10 ** 6), n=st.integers(0, 600))
def test_pow_is_repeated_multiplication(q, a, n):
    F = field_of_order(q)
    a %= q
    acc = 1
    for _ in range(n % 40):
        acc = F.mul(acc, a)
    assert F.pow(a, n % 40) == acc
