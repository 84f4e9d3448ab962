"""Polynomial and rational-function layer: exact arithmetic, gcd, roots."""
import random
from fractions import Fraction

import pytest

from graphfield.coeffs import CoeffField
from graphfield.polynomials import Poly
from graphfield.ratfunc import RatFunc

Q = CoeffField(0)
F3 = CoeffField(3)


def P(nvars=2, field=Q):
    return {
        "zero": Poly.zero(field, nvars),
        "one": Poly.one(field, nvars),
        "x": Poly.var(field, nvars, 0),
        "y": Poly.var(field, nvars, 1) if nvars > 1 else None,
    }


def rand_poly(rng, field=Q, nvars=2, terms=3, deg=3):
    t = {}
    for _ in range(terms):
        e = tuple(rng.randint(0, deg) for _ in range(nvars))
        t[e] = field.of_int(rng.choice([-3, -2, -1, 1, 2, 3]))
    return Poly(field, nvars, t)


def test_poly_ring_axioms_random():
    rng = random.Random(0)
    for _ in range(40):
        a, b, c = (rand_poly(rng) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert a + (b + c) == (a + b) + c
        assert (a - a).is_zero()


def test_poly_gcd_known_factors():
    rng = random.Random(1)
    for _ in range(25):
        g = rand_poly(rng, terms=2, deg=2)
        if g.is_zero():
            continue
        a = g * rand_poly(rng, terms=2, deg=2)
        b = g * rand_poly(rng, terms=2, deg=2)
        if a.is_zero() or b.is_zero():
            continue
        d = a.gcd(b)
        assert d.divexact(g.monic_deglex()) is not None  # g divides the gcd
        assert a.divexact(d) is not None and b.divexact(d) is not None


def test_poly_gcd_coprime():
    x = Poly.var(Q, 2, 0)
    y = Poly.var(Q, 2, 1)
    one = Poly.one(Q, 2)
    assert (x + one).gcd(y + one).is_one()
    assert x.gcd(y).is_one()


def test_poly_gcd_char3():
    x = Poly.var(F3, 2, 0)
    y = Poly.var(F3, 2, 1)
    one = Poly.one(F3, 2)
    g = x + y
    a = g * (x + one)
    b = g * (y + one)
    assert a.gcd(b) == g.monic_deglex()


def test_divexact_and_multiplicity():
    x = Poly.var(Q, 1, 0)
    one = Poly.one(Q, 1)
    f = (x + one) ** 3 * (x - one)
    assert f.multiplicity_of(x + one) == 3
    assert f.multiplicity_of(x - one) == 1
    assert f.multiplicity_of(x) == 0
    q = f.divexact((x + one) ** 2)
    assert q == (x + one) * (x - one)
    assert f.divexact(x + Poly.const(Q, 1, Fraction(5))) is None


def test_poly_pth_root():
    rng = random.Random(2)
    for p in (2, 3, 5):
        for _ in range(10):
            h = rand_poly(rng, terms=2, deg=2)
            if h.is_zero():
                continue
            f = h**p
            r = f.pth_root(p)
            assert r is not None and r**p == f
    x = Poly.var(Q, 2, 0)
    assert (x + Poly.one(Q, 2)).pth_root(3) is None
    assert Poly.const(Q, 2, Fraction(8)).pth_root(3) == Poly.const(Q, 2, Fraction(2))


def test_poly_pth_root_char_p():
    x = Poly.var(F3, 1, 0)
    one = Poly.one(F3, 1)
    f = (x + one) ** 3
    r = f.pth_root(3)
    assert r == x + one  # Frobenius


def test_stretch_and_permute():
    x = Poly.var(Q, 2, 0)
    y = Poly.var(Q, 2, 1)
    f = x * y + x
    assert f.stretch((3, 2)) == Poly.var(Q, 2, 0, 3) * Poly.var(Q, 2, 1, 2) + Poly.var(Q, 2, 0, 3)
    assert f.permute_vars([1, 0]) == y * x + y


def test_eval_mod():
    x = Poly.var(Q, 2, 0)
    f = x * x + Poly.const(Q, 2, Fraction(1, 2))
    assert f.eval_mod([3, 0], 7) == (9 + pow(2, -1, 7)) % 7
    with pytest.raises(ZeroDivisionError):
        f.eval_mod([3, 0], 2)  # denominator 2 vanishes mod 2


# -- rational functions ----------------------------------------------------------------


def rand_ratfunc(rng, nvars=2):
    num = rand_poly(rng, nvars=nvars, terms=2, deg=2)
    den = rand_poly(rng, nvars=nvars, terms=2, deg=2)
    while den.is_zero():
        den = rand_poly(rng, nvars=nvars, terms=2, deg=2)
    return RatFunc(num, den)


def test_ratfunc_field_axioms_random():
    rng = random.Random(3)
    for _ in range(30):
        a, b, c = (rand_ratfunc(rng) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert (a - b) + b == a
        if not a.is_zero():
            assert (a * a.inv()).is_one()
            assert (b / a) * a == b


def test_ratfunc_examples():
    x = Poly.var(Q, 2, 0)
    one = Poly.one(Q, 2)
    f = RatFunc(x + one, x)
    g = RatFunc(x, x + one)
    assert (f * g).is_one()
    h1 = RatFunc(one, x - one)
    h2 = RatFunc(one, x + one)
    s = h1 + h2
    assert s == RatFunc(x.scale(Fraction(2)), x * x - one)


def test_ratfunc_canonical_form():
    x = Poly.var(Q, 1, 0)
    one = Poly.one(Q, 1)
    a = RatFunc((x + one) * (x - one), (x - one) * x)
    b = RatFunc(x + one, x)
    assert a == b  # reduced to the same canonical pair
    assert a.den.leading()[1] == Q.one  # monic denominator


def test_ratfunc_pth_root():
    rng = random.Random(4)
    for _ in range(10):
        a = rand_ratfunc(rng)
        if a.is_zero():
            continue
        cube = a * a * a
        r = cube.pth_root(3)
        assert r is not None and (r * r * r) == cube


def test_coeff_field_is_p_high():
    assert Q.is_p_high(Fraction(1), 3)
    assert Q.is_p_high(Fraction(-1), 5)
    assert not Q.is_p_high(Fraction(2), 3)
    F7 = CoeffField(7)
    # gcd(5, 6) = 1: fifth-power map is onto F_7
    assert all(F7.is_p_high(a, 5) for a in range(7))
    # 3 | 6: only the stable cubic-power subgroup qualifies
    high3 = [a for a in range(1, 7) if F7.is_p_high(a, 3)]
    assert sorted(high3) == [1, 6]
