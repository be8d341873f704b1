import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratsurf.field import (
    FieldError,
    GF,
    combine_from_base,
    embed,
    expand_to_base,
    extension,
    field_of_order,
    frobenius_rel,
    in_subfield,
    is_irreducible,
    least_irreducible,
)

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 64, 81]


def _reducible_monic(p, k):
    """Every monic degree-k product of two monic factors of positive degree."""
    from itertools import product

    def monics(deg):
        for low in product(range(p), repeat=deg):
            yield tuple(low) + (1,)

    out = set()
    for a in range(1, k // 2 + 1):
        for f in monics(a):
            for g in monics(k - a):
                h = [0] * (k + 1)
                for i, x in enumerate(f):
                    for j, y in enumerate(g):
                        h[i + j] = (h[i + j] + x * y) % p
                out.add(tuple(h))
    return out


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_modulus_is_least_irreducible_by_brute_force(p, k):
    from itertools import product

    red = _reducible_monic(p, k)
    # lexicographic order with the constant term compared first
    least = next(tuple(low) + (1,) for low in product(range(p), repeat=k) if tuple(low) + (1,) not in red)
    assert field_of_order(p**k).modulus == least


def test_known_moduli():
    # coefficient tuples, constant term first
    assert field_of_order(4).modulus == (1, 1, 1)
    assert field_of_order(8).modulus == (1, 0, 1, 1)
    assert field_of_order(9).modulus == (1, 0, 1)
    assert field_of_order(25).modulus == (1, 1, 1)


def test_irreducibility_check():
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((1, 0, 1), 2)  # (t+1)^2
    assert not is_irreducible((2, 0, 1), 3)  # t^2 - 1
    assert least_irreducible(3, 2) == (1, 0, 1)


def test_f4_multiplication_table():
    F = field_of_order(4)
    # encodings: 0, 1, t=2, t+1=3 with t^2 = t + 1
    expected = np.array([[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]])
    assert np.array_equal(F.mul_table, expected)
    assert np.array_equal(F.add_table, np.bitwise_xor.outer(np.arange(4), np.arange(4)))


def test_f9_square_of_generator_is_minus_one():
    F = field_of_order(9)
    t = 3  # encoding of t
    assert F.mul(t, t) == 2


def test_bad_orders_rejected():
    for q in (0, 1, 6, 10, 12):
        with pytest.raises(FieldError):
            field_of_order(q)


def test_header_round_trip_information():
    assert field_of_order(9).header() == "p=3 k=2 modulus=1,0,1"


@pytest.mark.parametrize("q", ORDERS)
def test_multiplicative_group_is_cyclic(q):
    F = field_of_order(q)
    g = F.generator
    seen = {F.pow(g, e) for e in range(q - 1)}
    assert seen == set(range(1, q))


@pytest.mark.parametrize("q", ORDERS)
def test_inverse_and_fermat(q):
    F = field_of_order(q)
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, q - 1) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@pytest.mark.parametrize("q", ORDERS)
def test_frobenius_is_additive_and_multiplicative(q):
    F = field_of_order(q)
    rng = np.random.default_rng(q)
    for a, b in rng.integers(0, q, size=(30, 2)):
        a, b = int(a), int(b)
        assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
        assert F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b))


field_and_elems = st.sampled_from(ORDERS).flatmap(
    lambda q: st.tuples(st.just(q), st.integers(0, q - 1), st.integers(0, q - 1), st.integers(0, q - 1))
)


@given(field_and_elems)
@settings(max_examples=300, deadline=None)
def test_field_axioms(data):
    q, a, b, c = data
    F = field_of_order(q)
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a
    assert F.add(a, F.neg(a)) == 0
    if b:
        assert F.mul(F.div(a, b), b) == a


@given(field_and_elems)
@settings(max_examples=100, deadline=None)
def test_vectorised_ops_agree_with_scalars(data):
    q, a, b, _ = data
    F = field_of_order(q)
    va, vb = np.array([a, b, a]), np.array([b, a, 0])
    assert list(F.vadd(va, vb)) == [F.add(x, y) for x, y in zip(va, vb)]
    assert list(F.vmul(va, vb)) == [F.mul(x, y) for x, y in zip(va, vb)]
    assert list(F.vsub(va, vb)) == [F.sub(x, y) for x, y in zip(va, vb)]
    assert list(F.vpow(va, 5)) == [F.pow(x, 5) for x in va]


@pytest.mark.parametrize("q,d", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (5, 3), (9, 2), (4, 3)])
def test_embedding_is_a_field_homomorphism(q, d):
    F = field_of_order(q)
    E = extension(F, d)
    assert E.order == q**d
    images = [embed(a, F, E) for a in range(q)]
    assert len(set(images)) == q
    for a in range(q):
        assert in_subfield(images[a], E, F)
        assert frobenius_rel(images[a], E, F) == images[a]
        for b in range(q):
            assert embed(F.add(a, b), F, E) == E.add(images[a], images[b])
            assert embed(F.mul(a, b), F, E) == E.mul(images[a], images[b])


@pytest.mark.parametrize("q,d", [(2, 3), (3, 2), (4, 2), (5, 3)])
def test_expand_combine_round_trip(q, d):
    F = field_of_order(q)
    E = extension(F, d)
    for x in range(E.order):
        coords = expand_to_base(x, E, F)
        assert len(coords) == d and all(0 <= c < q for c in coords)
        assert combine_from_base(coords, E, F) == x


@pytest.mark.parametrize("q,d", [(2, 3), (3, 3), (4, 2)])
def test_relative_frobenius_has_order_d(q, d):
    F = field_of_order(q)
    E = extension(F, d)
    for x in range(E.order):
        y = x
        for _ in range(d):
            y = frobenius_rel(y, E, F)
        assert y == x
        assert frobenius_rel(x, E, F) == E.pow(x, q)


def test_f4_is_not_a_subfield_of_f8():
    with pytest.raises(FieldError):
        embed(1, field_of_order(4), field_of_order(8))


def test_element_wrapper_operators():
    F = field_of_order(9)
    a, b = F.elem(3), F.elem(5)
    assert int(a * b) == F.mul(3, 5)
    assert int(a + b) == F.add(3, 5)
    assert int(a - b) == F.sub(3, 5)
    assert int(a / b) == F.div(3, 5)
    assert int(a**4) == F.pow(3, 4)
    assert not F.elem(0)
    with pytest.raises((FieldError, ValueError)):
        a + field_of_order(3).elem(1)


def test_instances_are_shared():
    assert field_of_order(8) is field_of_order(8)
    assert isinstance(field_of_order(8), GF)
