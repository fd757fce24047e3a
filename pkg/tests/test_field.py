"""Finite-field arithmetic checked against a naive polynomial oracle."""

import itertools

import pytest
from hypothesis import given, strategies as st

from galois_qm.field import (
    FieldMismatchError, abs_map, field_new, field_of_order, format_element, frobenius,
    is_irreducible, prime_power, sign_map, to_prime_subfield,
)

AXIOM_Q = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49)
FROBENIUS_Q = AXIOM_Q + (32, 64, 81)


def naive_mul(a, b, modulus, p):
    """Schoolbook product of coefficient tuples reduced by the modulus."""
    n = len(modulus) - 1
    prod = [0] * (2 * n)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for t, m in enumerate(modulus):
                prod[k - n + t] = (prod[k - n + t] - c * m) % p
    return tuple(prod[:n])


@pytest.mark.parametrize("q,expected", [(2, (2, 1)), (8, (2, 3)), (81, (3, 4)), (6, None), (1, None), (49, (7, 2))])
def test_prime_power(q, expected):
    assert prime_power(q) == expected


def test_moduli_and_generators():
    assert field_of_order(4).modulus == (1, 1, 1)
    assert field_of_order(8).modulus == (1, 1, 0, 1)
    assert field_of_order(9).modulus == (1, 0, 1)
    assert field_of_order(49).modulus == (1, 0, 1)
    assert format_element(field_of_order(9).generator) == "1+i"
    assert field_of_order(7).generator == 3
    assert field_of_order(5).generator == 2


def test_non_prime_power_rejected():
    with pytest.raises(ValueError):
        field_of_order(12)


def test_cached():
    assert field_new(3, 2) is field_of_order(9)


@pytest.mark.parametrize("q", [4, 8, 9, 16, 25, 27, 49])
def test_multiplication_matches_naive(q):
    spec = field_of_order(q)
    assert is_irreducible(spec.modulus, spec.p)
    for a, b in itertools.product(spec.elements(), repeat=2):
        assert (a * b).coeffs == naive_mul(a.coeffs, b.coeffs, spec.modulus, spec.p)
        assert (a + b).coeffs == tuple((x + y) % spec.p for x, y in zip(a.coeffs, b.coeffs))


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_prime_field_is_integers_mod_p(p):
    spec = field_new(p)
    for a, b in itertools.product(range(p), repeat=2):
        assert (spec(a) * spec(b)).value == a * b % p
        assert (spec(a) - spec(b)).value == (a - b) % p


@pytest.mark.parametrize("q", AXIOM_Q)
def test_field_axioms_exhaustive(q):
    spec = field_of_order(q)
    els = spec.elements()
    zero, one = spec.zero, spec.one
    for a in els:
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        if a:
            assert a * a.inverse() == one
        assert a ** (q - 1) == (one if a else zero)
    for a, b in itertools.product(els, repeat=2):
        assert a + b == b + a and a * b == b * a
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("q", FROBENIUS_Q)
def test_frobenius(q):
    spec = field_of_order(q)
    els = spec.elements()
    for a in els:
        f = a
        for _ in range(spec.n):
            f = frobenius(f)
        assert f == a
        assert frobenius(a) == a ** spec.p
        assert (frobenius(a) == a) == a.in_prime_subfield
    for a, b in itertools.product(els[: min(q, 27)], els):
        assert frobenius(a + b) == frobenius(a) + frobenius(b)
        assert frobenius(a * b) == frobenius(a) * frobenius(b)


def test_generator_is_primitive(small_field):
    g = small_field.generator
    powers = {(g ** k).value for k in range(small_field.q - 1)}
    assert len(powers) == small_field.q - 1


def test_mixed_fields_raise():
    with pytest.raises(FieldMismatchError):
        field_of_order(9).one + field_of_order(3).one


@pytest.mark.parametrize("p", [3, 7, 11, 19])
def test_sign_map_is_multiplicative(p):
    spec = field_new(p)
    squares = {(x * x).value for x in spec.nonzero()}
    for a in spec.elements():
        expected = 0 if not a else (1 if a.value in squares else -1)
        assert sign_map(a) == expected
        assert sign_map(-a) == -sign_map(a)
        for b in spec.elements():
            assert sign_map(a * b) == sign_map(a) * sign_map(b)


@pytest.mark.parametrize("q", [2, 3, 4, 7, 9, 11, 19, 49])
def test_abs_map_is_multiplicative(q):
    spec = field_of_order(q)
    for a, b in itertools.product(spec.elements(), repeat=2):
        assert abs_map(a * b) == abs_map(a) * abs_map(b)
    assert abs_map(spec.zero) == 0 and abs_map(spec.one) == 1


def test_sign_map_rejects_extension_and_p_1_mod_4():
    with pytest.raises(ValueError):
        sign_map(field_of_order(9).one)
    with pytest.raises(ValueError):
        sign_map(field_new(5).one)


def test_gf9_formatting(gf9):
    i = gf9.x
    assert i * i == -1
    assert format_element(-1 - i, signed=True) == "-1-i"
    assert format_element(1 - i, signed=True) == "1-i"
    assert to_prime_subfield(gf9(2)) == field_new(3)(2)
    with pytest.raises(ValueError):
        to_prime_subfield(i)


fields = st.sampled_from(AXIOM_Q).map(field_of_order)


@given(fields, st.data())
def test_inverse_roundtrip(spec, data):
    a = spec.element_at(data.draw(st.integers(1, spec.q - 1)))
    b = spec.element_at(data.draw(st.integers(0, spec.q - 1)))
    assert (b / a) * a == b
