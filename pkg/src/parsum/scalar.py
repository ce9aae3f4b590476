"""Exact arithmetic over the constants Q: rationals, polynomials and rational
functions in ``x``.

The heavy lifting (gcd, resultants, factorization over Q) is delegated to
sympy's sparse polynomial rings, which run on gmpy2 integers when available.
This module pins down the handful of conventions the rest of the package
relies on:

* ``Rational`` is the ground-domain element type of ``QQ`` (always reduced).
* ``XPoly`` is an element of ``QX = QQ[x]``.
* ``XRat`` is an element of ``K = QQ(x)``; use :func:`xrat_parts` to get the
  (numerator, monic denominator) pair.
"""

from __future__ import annotations

from math import comb
from typing import Iterable

from sympy.polys.domains import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

K = FracField("x", QQ, lex)
QX = K.ring
X = QX.gens[0]

Rational = type(QQ(1))
XPoly = type(X)
XRat = type(K.one)

# resultant ring: x first so that dmp_resultant eliminates x
_XJ = PolyRing("x,j", QQ, lex)


class ZeroPolynomialError(ValueError):
    pass


def poly_key(p):
    """Hashable key for a polynomial or fraction element.

    sympy caches polynomial hashes while its in-place division helpers may
    still mutate the object, so results of ``exquo`` and friends are not
    reliable dict keys themselves.
    """
    if hasattr(p, "numer"):
        return poly_key(p.numer), poly_key(p.denom)
    return frozenset(p.items())


def qq(value) -> Rational:
    """Coerce ints, Fractions, strings like ``"3/4"`` and mpq to ``Rational``."""
    if isinstance(value, str):
        num, _, den = value.partition("/")
        return QQ(int(num), int(den) if den else 1)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(int(value.numerator), int(value.denominator))
    return QQ(value)


def to_xrat(value) -> XRat:
    """Coerce a number, ``XPoly`` or ``XRat`` into ``K``."""
    if isinstance(value, XRat):
        if value.field is not K:
            raise TypeError(f"not an element of Q(x): {value!r}")
        return value
    if isinstance(value, XPoly):
        if value.ring is not QX:
            raise TypeError(f"not an element of Q[x]: {value!r}")
        return K(value)
    return K(qq(value))


def xrat_parts(r: XRat) -> tuple[XPoly, XPoly]:
    """Return ``(num, den)`` with ``den`` monic and ``gcd(num, den) = 1``."""
    num, den = r.numer, r.denom
    lc = den.LC
    return num.quo_ground(lc), den.quo_ground(lc)


def is_constant(r) -> bool:
    if isinstance(r, XRat):
        return r.numer.is_ground and r.denom.is_ground
    return r.is_ground


def constant_value(r) -> Rational:
    """The rational value of a constant ``XPoly``/``XRat``."""
    if isinstance(r, XRat):
        return r.numer.LC / r.denom.LC if r.numer else QQ(0)
    return r.LC if r else QQ(0)


def degree(p: XPoly) -> int | float:
    """Degree in x; ``-inf`` for the zero polynomial."""
    return p.degree() if p else float("-inf")


def taylor_shift(p: XPoly, k) -> XPoly:
    """``p(x + k)`` for a rational ``k``."""
    if not p or k == 0:
        return p
    k = qq(k)
    coeffs = [QQ(0)] * (p.degree() + 1)
    for (e,), c in p.terms():
        kp = QQ(1)
        for i in range(e, -1, -1):
            coeffs[i] += c * comb(e, i) * kp
            kp *= k
    return QX.from_dict({(i,): c for i, c in enumerate(coeffs) if c})


def xpoly_gcd(p: XPoly, q: XPoly) -> XPoly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    if not p and not q:
        return QX.zero
    return p.gcd(q).monic()


def shift_resultant(q: XPoly, s: XPoly) -> XPoly:
    """``Res_x(q(x), s(x + j))`` as a polynomial in the fresh variable ``j``.

    The result is returned in ``QX`` (so its variable prints as ``x``); its
    integer roots are exactly the shifts ``j`` with ``gcd(q(x), s(x+j)) != 1``.
    """
    if not q or not s:
        raise ZeroPolynomialError("zero polynomial has no resultant")
    x, j = _XJ.gens
    qq_ = _XJ.from_dict({(e, 0): c for (e,), c in q.terms()})
    ss = _XJ.zero
    for (e,), c in s.terms():
        ss += c * (x + j) ** e
    if qq_.degree(x) == 0 or ss.degree(x) == 0:
        # resultant with a constant is that constant to the other degree
        if qq_.degree(x) == 0:
            return QX(q.LC ** max(s.degree(), 0))
        return QX(s.LC ** max(q.degree(), 0))
    res = qq_.resultant(ss)
    if isinstance(res, type(_XJ.one)):
        return QX.from_dict({(m[0],): c for m, c in res.terms()})
    return QX(res)


def integer_roots(p: XPoly) -> list[int]:
    """All integer roots of a nonzero polynomial, ascending, without repeats."""
    if not p:
        raise ZeroPolynomialError("zero polynomial has infinitely many roots")
    roots = set()
    _, factors = p.factor_list()
    for f, _mult in factors:
        if f.degree() != 1:
            continue
        c1 = f.coeff(X)
        c0 = f.coeff(1)
        r = -c0 / c1
        if r.denominator == 1:
            roots.add(int(r.numerator))
    return sorted(roots)


def factor_x(p: XPoly) -> tuple[Rational, list[tuple[XPoly, int]]]:
    """Factor over Q into ``content * prod(f**m)`` with monic irreducible ``f``.

    Factors are sorted by (degree, coefficients) so output is deterministic.
    """
    if not p:
        raise ZeroPolynomialError("cannot factor the zero polynomial")
    content, factors = p.factor_list()
    out = []
    for f, m in factors:
        lc = f.LC
        content *= lc**m
        out.append((f.quo_ground(lc), m))
    out.sort(key=lambda fm: (fm[0].degree(), _coeff_key(fm[0]), fm[1]))
    return content, out


def _coeff_key(p: XPoly) -> tuple:
    d = dict(p.terms())
    return tuple(d.get((e,), QQ(0)) for e in range(p.degree(), -1, -1))


def monic_divisors(factors: Iterable[tuple[XPoly, int]]) -> list[XPoly]:
    """All monic divisors of ``prod(f**m)``."""
    divs = [QX.one]
    for f, m in factors:
        powers = [f**e for e in range(m + 1)]
        divs = [d * pw for d in divs for pw in powers]
    return divs


def rational_roots(p: XPoly) -> list[Rational]:
    """Distinct rational roots of ``p``, ascending."""
    if not p:
        raise ZeroPolynomialError("zero polynomial has infinitely many roots")
    _, factors = p.factor_list()
    roots = {-f.coeff(1) / f.coeff(X) for f, _ in factors if f.degree() == 1}
    return sorted(roots)


def scale_x(r, s) -> XRat:
    """Substitute ``x -> s*x`` in an ``XPoly`` or ``XRat``."""
    s = qq(s)

    def scale(p):
        return QX.from_dict({(e,): c * s**e for (e,), c in p.terms()})

    if isinstance(r, XRat):
        return K(scale(r.numer)) / K(scale(r.denom))
    return scale(r)
