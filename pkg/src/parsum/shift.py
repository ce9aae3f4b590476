"""The shift x -> x + 1 on Q(x): substitution, dispersion, Gosper-Petkovsek
forms and the shift-equation solver."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .scalar import (
    K,
    QQ,
    QX,
    Rational,
    XPoly,
    XRat,
    factor_x,
    integer_roots,
    is_constant,
    poly_key,
    shift_resultant,
    taylor_shift,
    to_xrat,
    xrat_parts,
)

NEG_INF = float("-inf")


def sigma_x(r, k: int):
    """Apply ``x -> x + k``; works on both ``XPoly`` and ``XRat``."""
    if k == 0:
        return r
    if isinstance(r, XRat):
        return K(taylor_shift(r.numer, k)) / K(taylor_shift(r.denom, k))
    return taylor_shift(r, k)


def dispersion_x(p: XPoly, q: XPoly) -> int | float:
    """Largest ``h >= 0`` with ``gcd(p(x), q(x + h)) != 1``, else ``-inf``."""
    if p.is_ground or q.is_ground:
        return NEG_INF
    hs = [h for h in integer_roots(shift_resultant(p, q)) if h >= 0]
    return max(hs) if hs else NEG_INF


@dataclass(frozen=True)
class GPForm:
    """``r = z * (a(x+1)/a(x)) * (b/c)`` with monic ``a``, ``b``, ``c``."""

    z: Rational
    a: XPoly
    b: XPoly
    c: XPoly

    def value(self) -> XRat:
        return K(self.z) * K(sigma_x(self.a, 1)) / K(self.a) * K(self.b) / K(self.c)


def _shift_offset(base: XPoly, f: XPoly) -> int | None:
    """Integer ``k`` with ``f(x) = base(x + k)`` for monic polynomials, if any."""
    d = base.degree()
    if f.degree() != d or d < 1:
        return None
    k = (_coeff(f, d - 1) - _coeff(base, d - 1)) / d
    if k.denominator != 1:
        return None
    k = int(k.numerator)
    return k if taylor_shift(base, k) == f else None


def _coeff(p: XPoly, e: int) -> Rational:
    return dict(p.terms()).get((e,), QQ(0))


def shift_classes(factors: list[XPoly]) -> list[tuple[XPoly, list[tuple[XPoly, int]]]]:
    """Group distinct monic irreducibles into classes ``{base(x + k)}``;
    returns ``(base, [(factor, k), ...])`` pairs."""
    classes: list[tuple[XPoly, list[tuple[XPoly, int]]]] = []
    for f in factors:
        for base, members in classes:
            k = _shift_offset(base, f)
            if k is not None:
                members.append((f, k))
                break
        else:
            classes.append((f, [(f, 0)]))
    return classes


def _class_exponents(e: dict[int, int]) -> tuple[dict, dict, dict]:
    """Split a finitely supported exponent vector ``e`` on one shift class into
    ``alpha, beta, gamma`` with ``e(k) = alpha(k-1) - alpha(k) + beta(k) - gamma(k)``.

    Offsets of ``b`` all lie strictly left of the offsets of ``c``; ``alpha(k) > 0``
    forces ``beta(k+1) = 0`` and ``gamma(k) = 0``. The prefix sums ``S`` are
    capped from above by left records (before the global max) and right
    records (after it); the gap is ``alpha``.
    """
    lo, hi = min(e) - 1, max(e)
    ks = list(range(lo, hi + 1))
    S, run = {}, 0
    for k in ks:
        run += e.get(k, 0)
        S[k] = run
    V = max(S.values())
    m = next(k for k in ks if S[k] == V)

    cap = {}
    nxt = None
    for k in range(m, lo - 1, -1):
        # left record: at least every earlier prefix sum
        if all(S[k] >= S[j] for j in range(lo, k)):
            nxt = S[k]
        cap[k] = nxt
    prv = None
    for k in range(m, hi + 1):
        if all(S[k] >= S[j] for j in range(k + 1, hi + 1)):
            prv = S[k]
        cap[k] = prv

    alpha = {k: cap[k] - S[k] for k in ks if cap[k] != S[k]}
    beta, gamma = {}, {}
    for k in ks:
        if k == lo:
            continue
        step = cap[k] - cap[k - 1]
        if k <= m and step:
            beta[k] = step
        elif k > m and step:
            gamma[k] = -step
    if cap[lo] != 0:
        beta[lo] = cap[lo]
    return alpha, beta, gamma


def gp_form(r) -> GPForm:
    """Gosper-Petkovsek form of a nonzero rational function."""
    r = to_xrat(r)
    if not r:
        raise ValueError("GP form undefined for zero")
    num, den = r.numer, r.denom
    z = num.LC / den.LC
    if num.is_ground and den.is_ground:
        return GPForm(z, QX.one, QX.one, QX.one)
    mult: dict = defaultdict(int)
    rep = {}
    for sign, p in ((1, num), (-1, den)):
        if p.is_ground:
            continue
        _, fs = factor_x(p)
        for f, m in fs:
            mult[poly_key(f)] += sign * m
            rep[poly_key(f)] = f
    a, b, c = QX.one, QX.one, QX.one
    for base, members in shift_classes(sorted(rep.values(), key=str)):
        e = defaultdict(int)
        for f, k in members:
            e[k] += mult[poly_key(f)]
        alpha, beta, gamma = _class_exponents(dict(e))
        for part, exps in ((0, alpha), (1, beta), (2, gamma)):
            for k, m in exps.items():
                f = taylor_shift(base, k) ** m
                if part == 0:
                    a *= f
                elif part == 1:
                    b *= f
                else:
                    c *= f
    return GPForm(z, a, b, c)


@dataclass(frozen=True)
class Unique:
    i: int


class _AllShifts:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "AllShifts"


AllShifts = _AllShifts()


def _monic(p: XPoly) -> XPoly:
    return p.quo_ground(p.LC)


def solve_shift(a, b) -> Unique | _AllShifts | None:
    """Solve ``sigma^i(a) = b`` for an integer ``i``.

    For nonconstant ``a`` there is at most one solution. The candidate comes
    from the subleading coefficient of the numerator (or denominator), so no
    factorization is needed.
    """
    a, b = to_xrat(a), to_xrat(b)
    if is_constant(a):
        return AllShifts if a == b else None
    an, ad = xrat_parts(a)
    bn, bd = xrat_parts(b)
    if an.degree() >= 1:
        p, q = an, bn
    else:
        p, q = ad, bd
    if q.is_zero or p.degree() != q.degree():
        return None
    d = p.degree()
    i = (_coeff(_monic(q), d - 1) - _coeff(_monic(p), d - 1)) / d
    if i.denominator != 1:
        return None
    i = int(i.numerator)
    return Unique(i) if sigma_x(a, i) == b else None
