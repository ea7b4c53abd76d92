from __future__ import annotations

import pytest

from cdcw.gf import ext_coords, ext_from_coords, make_field


SMALL_ORDERS = [(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1),
                (2, 2), (2, 3), (2, 4), (3, 2), (13, 1)]


@pytest.mark.parametrize("p,e", SMALL_ORDERS)
def test_field_axioms_exhaustive(p, e):
    F = make_field(p, e)
    q = F.order
    assert q == p**e
    els = list(F.elements())
    # commutativity, associativity, distributivity on the full cube
    for a in els:
        for b in els:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            for c in els:
                assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
                assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in els:
        assert F.add(a, 0) == a
        assert F.mul(a, 1) == a
        assert F.mul(a, 0) == 0
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1


@pytest.mark.parametrize("p,e", SMALL_ORDERS)
def test_generator_order(p, e):
    F = make_field(p, e)
    n = F.order - 1
    seen = set()
    x = 1
    for _ in range(n):
        seen.add(x)
        x = F.mul(x, F.generator)
    assert x == 1
    assert len(seen) == n


def test_gf4_table():
    F = make_field(2, 2)
    assert F.modulus == (1, 1, 1)  # x^2 + x + 1
    assert F.mul(2, 2) == 3
    assert F.mul(2, 3) == 1
    assert F.add(2, 3) == 1


def test_gf9_inverses():
    F = make_field(3, 2)
    for a in range(1, 9):
        assert F.mul(a, F.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_subtraction_and_division():
    for p, e in [(3, 1), (2, 3), (5, 1)]:
        F = make_field(p, e)
        for a in F.elements():
            for b in F.elements():
                assert F.add(F.sub(a, b), b) == a
                if b:
                    assert F.mul(F.div(a, b), b) == a


def test_pow_matches_repeated_mul():
    F = make_field(3, 2)
    for a in F.elements():
        acc = 1
        for e in range(6):
            assert F.pow(a, e) == acc
            acc = F.mul(acc, a)
    assert F.pow(2, -1) == F.inv(2)
    with pytest.raises(ZeroDivisionError):
        F.pow(0, -1)


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 5), (2, 10), (3, 4), (5, 3)])
def test_ext_coords_additive_bijection(p, m):
    base = make_field(p)
    E = base.extension(m)
    seen = set()
    for a in E.elements():
        cs = ext_coords(E, a)
        assert len(cs) == m
        assert all(0 <= c < p for c in cs)
        assert ext_from_coords(E, cs) == a
        seen.add(cs)
    assert len(seen) == E.order
    # additivity: coords(a + b) = coords(a) + coords(b) over the base
    import random

    rng = random.Random(0)
    for _ in range(200):
        a = rng.randrange(E.order)
        b = rng.randrange(E.order)
        ca, cb = ext_coords(E, a), ext_coords(E, b)
        want = tuple(base.add(x, y) for x, y in zip(ca, cb))
        assert ext_coords(E, E.add(a, b)) == want


def test_ext_embeds_base():
    base = make_field(2)
    E = base.extension(5)
    # 0 and 1 keep their meaning; base ops agree on the embedded copy
    assert E.add(0, 1) == 1
    assert E.mul(1, 1) == 1
    assert ext_coords(E, 0) == (0, 0, 0, 0, 0)
    assert ext_coords(E, 1) == (1, 0, 0, 0, 0)
    # the class of x is the integer 2 = base order
    assert ext_coords(E, 2) == (0, 1, 0, 0, 0)


def test_tower_extension_cached():
    base = make_field(2)
    assert base.extension(4) is base.extension(4)
    assert base.extension(1) is base


def test_frobenius_is_additive():
    base = make_field(2)
    E = base.extension(6)
    q = 2
    for i in range(1, 3):
        e = q**i
        for a in range(0, E.order, 7):
            for b in range(0, E.order, 11):
                lhs = E.pow(E.add(a, b), e)
                rhs = E.add(E.pow(a, e), E.pow(b, e))
                assert lhs == rhs


def test_error_cases():
    with pytest.raises(ValueError):
        make_field(4)  # not prime
    with pytest.raises(ValueError):
        make_field(6)
    with pytest.raises(ValueError):
        make_field(2, 0)
    with pytest.raises(ValueError):
        make_field(2, 7)  # 128 > base field ceiling
    with pytest.raises(ValueError):
        make_field(2).extension(17)  # 2^17 > extension ceiling
    F = make_field(3, 2)
    with pytest.raises(ValueError):
        F.from_digits((0, 3))
    with pytest.raises(ValueError):
        F.from_digits((1, 1, 1))
    with pytest.raises(ValueError):
        make_field(5).digits(2)
