from hypothesis import assume, given
from hypothesis import strategies as st

import pytest

from parsum import multipoly as mp
from parsum.classify import (
    Equivalent,
    Normal,
    NotEquivalent,
    Special,
    UnsupportedEigenvalues,
    _sigma_unit,
    dispersion,
    local_dispersion,
    min_annihilator,
    orbit_decomposition,
    sigma_equivalent,
    special_test,
    split_factorization,
)
from parsum.field import apply_sigma, make_companion
from parsum.scalar import K
from parsum.shift import NEG_INF

R = mp.ring(2)
t0, t1, x = R.gens
xk = K.gens[0]
EXAMPLE_DEN = 2592 * (3 * t0 - 2 * t1) ** 2 * (t0 - t1) ** 2 * (2 * t0 - t1) * (t0 + t1)


def test_special_test_examples(example, strange):
    assert special_test(example, 2 * t0 - t1) == Special(1, K(3))
    assert special_test(example, t0 + t1) == Normal()
    assert special_test(strange, t1) == Special(1, K(2))


def test_special_unit_by_hand(example):
    # sigma(2 t0 - t1) = 2 t1 - (-6 t0 + 5 t1)
    F = example.field
    assert apply_sigma(example, F(2 * t0 - t1)) == F(2 * t1 - (-6 * t0 + 5 * t1))
    assert F(2 * t1 - (-6 * t0 + 5 * t1)) == 3 * F(2 * t0 - t1)


def test_min_annihilator_examples(fib, example):
    assert min_annihilator(fib, t0).coeffs == (-1, -1, 1)
    assert min_annihilator(example, t0).coeffs == (6, -5, 1)
    assert min_annihilator(example, 2 * t0 - t1).coeffs == (-3, 1)


def test_annihilator_of_period_two_special():
    sys = make_companion([2, 0])
    assert special_test(sys, t0) == Special(2, K(2))
    assert min_annihilator(sys, t0).coeffs == (-2, 0, 1)


def test_sigma_equivalent_examples(example, fib):
    assert sigma_equivalent(example, t0 + t1, t0 - t1) == Equivalent(1, K(-6))
    assert sigma_equivalent(example, t0 + t1, 3 * t0 - 2 * t1) == Equivalent(2, K(-12))
    assert sigma_equivalent(fib, t0, 2 * t0 + t1) == NotEquivalent()


def test_fibonacci_orbit_oracle():
    # sigma^i(t0) = F(i-1) t0 + F(i) t1; (2, 1) is never proportional to a pair
    fibs = {0: 0, 1: 1}
    for i in range(2, 14):
        fibs[i] = fibs[i - 1] + fibs[i - 2]
    for i in range(-1, -14, -1):
        fibs[i] = fibs[i + 2] - fibs[i + 1]
    for i in range(-12, 13):
        a, b = fibs[i - 1], fibs[i]
        assert a * 1 != b * 2 or (a, b) == (0, 0)


def test_sigma_equivalent_strict_mode(fib):
    with pytest.raises(UnsupportedEigenvalues):
        sigma_equivalent(fib, t0, 2 * t0 + t1, fallback_scan=False)


def test_split_example_denominator(example):
    split = split_factorization(example, EXAMPLE_DEN)
    assert mp.unit_between(split.special_part(2), 2 * t0 - t1) is not None
    Pn = (3 * t0 - 2 * t1) ** 2 * (t0 - t1) ** 2 * (t0 + t1)
    assert mp.unit_between(split.normal_part(2), Pn) is not None
    kinds = {mp.normalize_assoc(f): type(c) for f, _, c in split.factors}
    assert kinds[mp.normalize_assoc(2 * t0 - t1)] is Special
    assert sum(k is Normal for k in kinds.values()) == 3


def test_split_trivial(example, strange):
    split = split_factorization(example, R.one)
    assert split.special_part(2) == 1 and split.normal_part(2) == 1
    split = split_factorization(strange, t1**2)
    assert split.special_part(2) == t1**2 and split.normal_part(2) == 1


def test_split_with_supplied_factors(example):
    fs = [(3 * t0 - 2 * t1, 2), (t0 - t1, 2), (2 * t0 - t1, 1), (t0 + t1, 1)]
    a = split_factorization(example, EXAMPLE_DEN)
    b = split_factorization(example, EXAMPLE_DEN, fs)
    assert a == b
    with pytest.raises(ValueError):
        split_factorization(example, EXAMPLE_DEN, fs[:2])


def test_orbit_decomposition_examples(example, fib):
    table = orbit_decomposition(example, [3 * t0 - 2 * t1, t0 - t1, t0 + t1])
    assert len(table.orbits) == 1
    offsets = {m.index: m.offset for m in table.orbits[0]}
    assert offsets == {2: 0, 1: 1, 0: 2}
    units = {m.index: m.unit for m in table.orbits[0]}
    assert units == {2: 1, 1: -6, 0: -12}
    assert len(orbit_decomposition(fib, [t0, 2 * t0 + t1]).orbits) == 2
    single = orbit_decomposition(fib, [t0])
    assert [(m.index, m.offset) for m in single.orbits[0]] == [(0, 0)]


def test_dispersion_examples(example):
    B = (3 * t0 - 2 * t1) ** 2 * (t0 - t1) ** 2 * (t0 + t1)
    assert dispersion(example, B) == 2
    assert dispersion(example, (2 * t0 - t1) ** 3) == NEG_INF
    assert dispersion(example, t0 + t1) == 0
    assert local_dispersion(example, B, t0 - t1) == 2


nonzero = st.integers(-4, 4).filter(bool)


@st.composite
def normal_polys(draw, sys):
    a = draw(nonzero) + draw(st.integers(-2, 2)) * x
    b = draw(nonzero) + draw(st.integers(-2, 2)) * x
    p = a * t0 + b * t1
    if draw(st.booleans()):
        p = p * t0 + draw(st.integers(1, 3)) * t1**2
        _, fs = mp.factor_t(p)
        assume(len(fs) == 1 and fs[0][1] == 1)
    assume(isinstance(special_test(sys, p), Normal))
    return p


EXAMPLE = make_companion([-6, 5])
FIB = make_companion([1, 1])
X_SYS = make_companion([xk + 1, 2 * xk])


def _planted(sys, data):
    p = data.draw(normal_polys(sys))
    i = data.draw(st.integers(-5, 5))
    u = K(data.draw(st.integers(1, 5))) * (xk + data.draw(st.integers(0, 3))) ** data.draw(st.integers(0, 1))
    num, den = mp.parts(apply_sigma(sys, sys.field(p), i))
    q = num * mp.lift_x(u.numer, 2)
    return p, i, q


@pytest.mark.parametrize("sys", [EXAMPLE, FIB, X_SYS], ids=["example", "fibonacci", "x-companion"])
@given(data=st.data())
def test_planted_shift_recovery(sys, data):
    p, i, q = _planted(sys, data)
    r = sigma_equivalent(sys, p, q)
    assert isinstance(r, Equivalent) and r.i == i
    assert _sigma_unit(sys, p, q, i) == r.u
    # uniqueness of the shift
    for j in range(-10, 11):
        if j != i:
            assert _sigma_unit(sys, p, q, j) is None


@pytest.mark.parametrize("sys", [EXAMPLE, FIB, X_SYS], ids=["example", "fibonacci", "x-companion"])
@given(data=st.data())
def test_annihilator_shape(sys, data):
    p = data.draw(normal_polys(sys))
    L = min_annihilator(sys, p)
    assert L.order > 1
    assert len(L.support()) >= 3
    assert L.apply(sys, sys.field(p)) == 0


@given(st.sampled_from([(EXAMPLE, 2 * t0 - t1), (EXAMPLE, 3 * t0 - t1), (make_companion([2, 0]), t0)]), st.integers(1, 3))
def test_annihilator_order_one_iff_special(case, power):
    sys, p = case
    c = special_test(sys, p)
    L = min_annihilator(sys, p**power)
    assert isinstance(c, Special)
    assert (L.order == 1) == (c.ell == 1)
    if c.ell == 1:
        assert L.coeffs == (-(c.unit**power), 1)
