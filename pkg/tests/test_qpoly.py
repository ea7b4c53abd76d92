from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from cdcw.qpoly import PolyQ, PolyRatio, gauss_poly, poly_eval, poly_parse, poly_print


def test_parse_print_round_trip_known():
    cases = [
        "q^9+2q^3+1",
        "q^8+q^5+q^4+q^2-q",
        "q^6+2q^2+2q+1",
        "q^12+2q^8+2q^7+q^6+2q^5+2q^4-2q^2-2q+1",
        "5q^4+3q^3+2q^2+q+1",
        "0",
        "1",
        "q",
        "-q+1",
    ]
    for text in cases:
        p = poly_parse(text)
        assert poly_print(p) == text
        assert poly_parse(poly_print(p)) == p


def test_parse_variants():
    assert poly_parse("3*q^2 - q + 4") == PolyQ({2: 3, 1: -1, 0: 4})
    assert poly_parse(" q ^ is invalid" if False else "2q") == PolyQ({1: 2})
    assert poly_parse("q^3 + q^3") == PolyQ({3: 2})
    with pytest.raises(ValueError):
        poly_parse("")
    with pytest.raises(ValueError):
        poly_parse("q^")
    with pytest.raises(ValueError):
        poly_parse("q**2")
    with pytest.raises(ValueError):
        poly_parse("2 2")


def test_arithmetic_basics():
    q = PolyQ.monomial(1, 1)
    p = (q + 1) * (q - 1)
    assert p == PolyQ({2: 1, 0: -1})
    assert p + 1 == q * q
    assert q**3 == PolyQ.monomial(1, 3)
    assert (q**2 + q + 1) * (q - 1) == q**3 - 1
    assert poly_eval(q**3 - 1, 3) == 26


coeff_dicts = st.dictionaries(st.integers(0, 12), st.integers(-50, 50), max_size=8)


@given(coeff_dicts, coeff_dicts, st.integers(2, 9))
def test_eval_is_ring_homomorphism(c1, c2, q):
    a, b = PolyQ(c1), PolyQ(c2)
    assert (a + b).evaluate(q) == a.evaluate(q) + b.evaluate(q)
    assert (a * b).evaluate(q) == a.evaluate(q) * b.evaluate(q)
    assert (a - b).evaluate(q) == a.evaluate(q) - b.evaluate(q)


@given(coeff_dicts)
def test_print_parse_round_trip(c):
    p = PolyQ(c)
    assert poly_parse(poly_print(p)) == p


def test_gauss_poly_values():
    assert gauss_poly(5, 2) == poly_parse("q^6+q^5+2q^4+2q^3+2q^2+q+1")
    assert gauss_poly(5, 2).evaluate(2) == 155
    assert gauss_poly(6, 3).evaluate(2) == 1395
    assert gauss_poly(6, 2).evaluate(2) == 651
    assert gauss_poly(4, 2).evaluate(2) == 35
    assert gauss_poly(6, 1).evaluate(2) == 63
    assert gauss_poly(6, 3).evaluate(3) == 33880


@given(st.integers(0, 10), st.integers(0, 10))
def test_gauss_poly_symmetry_and_pascal(n, k):
    if 0 <= k <= n:
        assert gauss_poly(n, k) == gauss_poly(n, n - k)
    if 1 <= k <= n - 1:
        lhs = gauss_poly(n, k)
        rhs = gauss_poly(n - 1, k - 1) + PolyQ.monomial(1, k) * gauss_poly(n - 1, k)
        assert lhs == rhs


@given(st.integers(0, 9), st.integers(0, 9), st.integers(2, 5))
def test_gauss_poly_counts_product_formula(n, k, q):
    if k > n:
        assert gauss_poly(n, k) == PolyQ(0)
        return
    num = den = 1
    for i in range(k):
        num *= q**(n - i) - 1
        den *= q**(i + 1) - 1
    assert gauss_poly(n, k).evaluate(q) * den == num


def test_poly_ratio():
    r = PolyRatio(gauss_poly(6, 3), gauss_poly(3, 1))
    # gauss(6,3)/gauss(3,1) at q=2: 1395/7
    assert r.evaluate(2).numerator == 1395
    assert r.evaluate(2).denominator == 7
    assert r.floor_evaluate(2) == 199
    # cross-multiplied equality
    assert PolyRatio(gauss_poly(4, 2) * gauss_poly(2, 1), gauss_poly(2, 1)) == gauss_poly(4, 2)
    with pytest.raises(ValueError):
        poly_eval(r, 2)


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        PolyQ({-1: 1})
    with pytest.raises(ValueError):
        PolyQ.monomial(1, 2) ** -1
