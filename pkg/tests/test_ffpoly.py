"""Polynomial arithmetic over F_p."""
import numpy as np
import pytest

from algebra.ffpoly import (
    PolyOverFp,
    divides,
    format_poly,
    int_to_poly,
    parse_poly,
    poly_arith,
    poly_divmod,
    poly_gcd,
    poly_pow,
    poly_to_int,
)
from utils.errors import InvalidInputError, ModulusMismatchError, PolynomialDivisionError


def test_canonical_form():
    a = PolyOverFp.make([4, 5, 3, 0], 3)
    assert a.coeffs == (1, 2)
    assert a.degree == 1
    assert PolyOverFp.zero(3).degree == -1


def test_field_arithmetic():
    x1 = PolyOverFp.linear(1, 2)
    assert x1 * x1 == PolyOverFp.make([1, 0, 1], 2)
    assert x1 + x1 == PolyOverFp.zero(2)
    assert PolyOverFp.linear(-1, 3) == PolyOverFp.make([2, 1], 3)


def test_divmod_identity():
    a = PolyOverFp.make([1, 2, 0, 1, 2, 1], 3)
    b = PolyOverFp.make([2, 0, 1], 3)
    q, r = poly_divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_division_by_zero():
    with pytest.raises(PolynomialDivisionError):
        poly_divmod(PolyOverFp.one(5), PolyOverFp.zero(5))


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatchError):
        PolyOverFp.one(2) + PolyOverFp.one(3)


def test_gcd_is_monic():
    x = PolyOverFp.x(5)
    a = x * PolyOverFp.linear(1, 5) * 3
    b = x * PolyOverFp.linear(2, 5)
    assert poly_gcd(a, b) == x
    with pytest.raises(InvalidInputError):
        poly_gcd(PolyOverFp.zero(5), PolyOverFp.zero(5))


def test_frobenius_power():
    # (X + 1)^p = X^p + 1 in characteristic p
    assert poly_pow(PolyOverFp.linear(1, 7), 7) == PolyOverFp.make([1] + [0] * 6 + [1], 7)
    assert poly_pow(PolyOverFp.linear(1, 7), 0) == PolyOverFp.one(7)


def test_integer_correspondence():
    assert int_to_poly(726, 3) == PolyOverFp.make([0, 2, 2, 2, 2, 2], 3)
    for n in (0, 1, 9, 1000):
        assert poly_to_int(int_to_poly(n, 2)) == n


def test_divides():
    b = PolyOverFp.x(2)
    assert divides(poly_pow(b, 3), int_to_poly(8, 2))
    assert not divides(poly_pow(b, 4), int_to_poly(8, 2))


def test_text_form():
    a = parse_poly("1,1,1", 2)
    assert format_poly(a) == "1,1,1"
    assert format_poly(PolyOverFp.zero(2)) == "0"
    with pytest.raises(InvalidInputError):
        parse_poly("1,a", 2)


def _random_poly(rng, p, max_degree=8):
    degree = int(rng.integers(-1, max_degree + 1))
    return PolyOverFp.make(rng.integers(0, p, size=degree + 1).tolist(), p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_ring_axioms(p):
    rng = np.random.default_rng(p)
    for _ in range(60):
        a, b, c = (_random_poly(rng, p) for _ in range(3))
        assert poly_arith(a, b, "add") == poly_arith(b, a, "add")
        assert poly_arith(a, b, "mul") == poly_arith(b, a, "mul")
        assert poly_arith(poly_arith(a, b, "add"), c, "add") == poly_arith(a, poly_arith(b, c, "add"), "add")
        assert poly_arith(poly_arith(a, b, "mul"), c, "mul") == poly_arith(a, poly_arith(b, c, "mul"), "mul")
        assert poly_arith(a, poly_arith(b, c, "add"), "mul") == \
            poly_arith(poly_arith(a, b, "mul"), poly_arith(a, c, "mul"), "add")
        assert poly_arith(a, a, "sub").is_zero()
        assert poly_arith(poly_arith(a, b, "sub"), b, "add") == a


def test_poly_arith_rejects_unknown_operation():
    with pytest.raises(InvalidInputError):
        poly_arith(PolyOverFp.one(2), PolyOverFp.x(2), "div")


@pytest.mark.parametrize("p", [2, 3, 5])
def test_division_invariant(p):
    rng = np.random.default_rng(100 + p)
    checked = 0
    for _ in range(60):
        a = _random_poly(rng, p, max_degree=14)
        b = _random_poly(rng, p)
        if b.is_zero():
            continue
        q, r = poly_divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree
        checked += 1
    assert checked > 0


@pytest.mark.parametrize("p,w", [(p, w) for p in (2, 3, 5) for w in (1, 2, 3)])
def test_frobenius_on_random_polynomials(p, w):
    rng = np.random.default_rng(10 * p + w)
    q = p ** w
    for _ in range(5):
        a, b = _random_poly(rng, p, 4), _random_poly(rng, p, 4)
        assert poly_pow(a + b, q) == poly_pow(a, q) + poly_pow(b, q)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_integer_correspondence_below_ten_thousand(p):
    for n in range(10 ** 4):
        a = int_to_poly(n, p)
        assert poly_to_int(a) == n
        assert int_to_poly(poly_to_int(a), p) == a
