from hypothesis import given
from hypothesis import strategies as st

import pytest

from parsum.scalar import QX, K, X, taylor_shift, xpoly_gcd
from parsum.shift import NEG_INF, AllShifts, Unique, dispersion_x, gp_form, sigma_x, solve_shift

from conftest import nonconstant_xpolys, xrats

x = K.gens[0]


def test_sigma_x_examples():
    assert sigma_x(X, 1) == X + 1
    assert sigma_x((x - 1) / (x + 3), 5) == (x + 4) / (x + 8)
    assert sigma_x(K(7), -3) == 7


def test_dispersion_x_examples():
    assert dispersion_x(X * (X + 2), X) == 2
    assert dispersion_x(X, X + 2) == NEG_INF
    assert dispersion_x(X, X) == 0


def _brute_dispersion(p, q, bound=30):
    hs = [h for h in range(bound) if xpoly_gcd(p, taylor_shift(q, h)).degree() >= 1]
    return max(hs) if hs else NEG_INF


@given(nonconstant_xpolys(), nonconstant_xpolys())
def test_dispersion_matches_scan(p, q):
    assert dispersion_x(p, q) == _brute_dispersion(p, q)


def test_gp_form_examples():
    g = gp_form((x + 1) / x)
    assert (g.z, g.a, g.b, g.c) == (1, X, 1, 1)
    g = gp_form(x / (x + 2))
    assert (g.z, g.a, g.b, g.c) == (1, 1, X, X + 2)
    g = gp_form(K(3))
    assert (g.z, g.a, g.b, g.c) == (3, 1, 1, 1)


def test_gp_form_zero():
    with pytest.raises(ValueError, match="GP form undefined for zero"):
        gp_form(K.zero)


def check_gp_invariants(r):
    g = gp_form(r)
    assert g.value() == r
    for p in (g.a, g.b, g.c):
        assert p.LC == 1
    assert xpoly_gcd(taylor_shift(g.a, 1), g.b) == 1
    assert xpoly_gcd(g.a, g.c) == 1
    bound = dispersion_x(g.b, g.c) if g.b.degree() > 0 and g.c.degree() > 0 else NEG_INF
    assert bound == NEG_INF
    # explicit scan as a second check
    for h in range(0, 25):
        assert xpoly_gcd(g.b, taylor_shift(g.c, h)) == 1
    return g


def test_gp_form_shift_chain():
    # x^2/(x-1): naive decreasing-shift splitting fails the gcd conditions
    g = check_gp_invariants(x**2 / (x - 1))
    assert g.a == (X - 1) ** 2 and g.b == X - 1 and g.c == 1


@st.composite
def shifted_products(draw):
    base = draw(st.sampled_from([X, X**2 + 1, X + QX(1) / 2]))
    r = K(draw(st.integers(1, 4)) * draw(st.sampled_from([1, -1])))
    for _ in range(draw(st.integers(0, 5))):
        k = draw(st.integers(-4, 4))
        e = draw(st.sampled_from([1, -1, 2, -2]))
        r *= K(taylor_shift(base, k)) ** e
    return r


@given(shifted_products())
def test_gp_invariants_shift_classes(r):
    check_gp_invariants(r)


@given(xrats())
def test_gp_invariants_random(r):
    if r:
        check_gp_invariants(r)


@given(xrats(), st.integers(-10, 10))
def test_sigma_x_round_trip(r, k):
    assert sigma_x(sigma_x(r, k), -k) == r


def test_solve_shift_examples():
    assert solve_shift((x - 1) / (x + 3), (x + 4) / (x + 8)) == Unique(5)
    assert solve_shift(K(7), K(7)) is AllShifts
    assert solve_shift(x, x**2) is None


@given(xrats(), st.integers(-8, 8))
def test_solve_shift_planted(a, i):
    if a.numer.is_ground and a.denom.is_ground:
        return
    assert solve_shift(a, sigma_x(a, i)) == Unique(i)
