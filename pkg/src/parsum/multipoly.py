"""The rings R = Q(x)[t0..t{n-1}] and F = Q(x)(t0..t{n-1}).

Elements are stored over Q[t0..t{n-1}, x] using sympy's sparse rings, with
``x`` as the last generator of a lex ring. A ``TRat`` is a ``FracElement`` of
that field; it lies in R exactly when its denominator is free of t.
Normal forms modulo units of Q(x) are produced by :func:`normalize_assoc`:
primitive with respect to x (as a polynomial in t with Q[x] coefficients) and
leading coefficient 1 in lex order.
"""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache

from sympy.polys.domains import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import lex

from .scalar import K, QX, XPoly, XRat, xpoly_gcd

DEFAULT_FACTOR_DEGREE_CAP = 24


class DegreeTooLarge(ValueError):
    """Raised when a factorization input exceeds the configured degree cap."""


@lru_cache(maxsize=None)
def field(n: int) -> FracField:
    if n < 1:
        raise ValueError("need at least one t-variable")
    names = ",".join([f"t{i}" for i in range(n)] + ["x"])
    return FracField(names, QQ, lex)


def ring(n: int):
    return field(n).ring


def nvars(p) -> int:
    """Number of t-variables of a ring or field element."""
    return (p.field.ngens if hasattr(p, "field") else p.ring.ngens) - 1


def tgens(n: int) -> list:
    return list(ring(n).gens[:n])


def xgen(n: int):
    return ring(n).gens[n]


def from_x(r, n: int):
    """Embed an ``XPoly``/``XRat``/number into ``field(n)``."""
    F = field(n)
    R = F.ring
    if isinstance(r, XRat):
        return F.new(lift_x(r.numer, n), lift_x(r.denom, n))
    if hasattr(r, "ring") and r.ring is QX:
        return F(lift_x(r, n))
    return F(R(r))


def lift_x(p: XPoly, n: int):
    R = ring(n)
    z = (0,) * n
    return R.from_dict({z + m: c for m, c in p.terms()})


def x_part(p) -> XPoly:
    """Project a t-free ring element to ``QX``."""
    n = nvars(p)
    out = {}
    for m, c in p.terms():
        if any(m[:n]):
            raise ValueError("element depends on t")
        out[(m[n],)] = c
    return QX.from_dict(out)


def to_xrat(f) -> XRat:
    """Project a t-free field element to ``K``."""
    return K(x_part(f.numer)) / K(x_part(f.denom))


def is_tfree(p) -> bool:
    n = nvars(p)
    return all(not any(m[:n]) for m in p.monoms())


def is_tpoly(f) -> bool:
    """True iff the field element lies in R (t-free denominator)."""
    return is_tfree(f.denom)


def t_coeffs(p) -> dict[tuple, XPoly]:
    """Coefficients of ``p`` in Q[x], indexed by t-exponent vectors."""
    n = nvars(p)
    acc: dict[tuple, dict] = defaultdict(dict)
    for m, c in p.terms():
        acc[m[:n]][(m[n],)] = c
    return {k: QX.from_dict(v) for k, v in acc.items()}


def from_t_coeffs(coeffs: dict[tuple, XPoly], n: int):
    R = ring(n)
    out = {}
    for tm, c in coeffs.items():
        for (e,), v in c.terms():
            out[tm + (e,)] = v
    return R.from_dict(out)


def t_degree(p) -> int | float:
    """Total degree in the t-variables; ``-inf`` for zero."""
    if not p:
        return float("-inf")
    n = nvars(p)
    return max(sum(m[:n]) for m in p.monoms())


def t_order(p) -> int | float:
    """Smallest total t-degree of a term; ``inf`` for zero."""
    if not p:
        return float("inf")
    n = nvars(p)
    return min(sum(m[:n]) for m in p.monoms())


def x_content(p) -> XPoly:
    """Monic gcd in Q[x] of the t-coefficients."""
    g = QX.zero
    for c in t_coeffs(p).values():
        g = xpoly_gcd(g, c)
        if g == 1:
            break
    return g


def normalize_assoc(p):
    """Canonical associate of ``p`` under units of Q(x): x-primitive, LC 1."""
    if not p:
        return p
    n = nvars(p)
    g = x_content(p)
    if g != 1:
        p = p.exquo(lift_x(g, n))
    return p.quo_ground(p.LC)


def unit_between(p, q) -> XRat | None:
    """``u`` in Q(x) with ``p = u*q`` if one exists, else ``None``."""
    if not p or not q:
        return K.zero if not p and not q else None
    cp, cq = t_coeffs(p), t_coeffs(q)
    if cp.keys() != cq.keys():
        return None
    lead = max(cp)
    u = K(cp[lead]) / K(cq[lead])
    for k in cp:
        if K(cp[k]) != u * K(cq[k]):
            return None
    return u


def sort_key(p) -> tuple:
    """Deterministic order: t-degree, then lex monomials and coefficients."""
    terms = sorted(p.terms(), reverse=True)
    return (t_degree(p), tuple((m, -1 if c < 0 else 1, abs(c)) for m, c in terms))


def parts(f):
    """``(num, den)`` of a field element with den leading coefficient 1."""
    num, den = f.numer, f.denom
    lc = den.LC
    return num.quo_ground(lc), den.quo_ground(lc)


def tpoly_gcd(p, q):
    """gcd in R of two ring elements (or t-polynomial field elements)."""
    p, q = _numer(p), _numer(q)
    if not p and not q:
        return p
    return normalize_assoc(p.gcd(q))


def _numer(p):
    return p.numer if hasattr(p, "numer") else p


def _split_x(p) -> tuple[XRat, object]:
    """``p = u * P`` with ``u`` in Q(x) and ``P`` normalized."""
    P = normalize_assoc(p)
    return unit_between(p, P), P


def squarefree_t(P) -> list[tuple[object, int]]:
    """Square-free decomposition over Q(x); parts normalized, x-content dropped."""
    P = _numer(P)
    if not P:
        raise ValueError("square-free decomposition of zero")
    _, prim = _split_x(P)
    _, parts_ = prim.sqf_list()
    out = [(normalize_assoc(f), m) for f, m in parts_ if not is_tfree(f)]
    return sorted(out, key=lambda fm: (-fm[1], sort_key(fm[0])))


def factor_t(P, degree_cap: int = DEFAULT_FACTOR_DEGREE_CAP) -> tuple[XRat, list[tuple[object, int]]]:
    """Irreducible factorization over Q(x): ``P = unit * prod(f**m)``."""
    if not P:
        raise ValueError("cannot factor zero")
    n = nvars(P)
    if hasattr(P, "numer"):
        if not is_tpoly(P):
            raise ValueError("not a polynomial in t")
        unit = K.one / K(x_part(P.denom))
        P = P.numer
    else:
        unit = K.one
    total = max(sum(m) for m in P.monoms())
    if total > degree_cap:
        raise DegreeTooLarge(
            f"total degree {total} exceeds cap {degree_cap}; supply factored input"
        )
    u, prim = _split_x(P)
    unit *= u
    c, fs = prim.factor_list()
    unit *= K(c)
    out = []
    for f, m in fs:
        if is_tfree(f):
            unit *= to_xrat(field(n)(f)) ** m
            continue
        g = normalize_assoc(f)
        unit *= unit_between(f, g) ** m
        out.append((g, m))
    out.sort(key=lambda fm: sort_key(fm[0]))
    return unit, out


def homogeneous_components(P) -> list[tuple[int, object]]:
    """Split an element of R into t-homogeneous parts, by ascending degree."""
    if hasattr(P, "numer"):
        num, den = P.numer, P.denom
        F = P.field
    else:
        num, den = P, None
        F = None
    n = nvars(num)
    groups: dict[int, dict] = defaultdict(dict)
    for m, c in num.terms():
        groups[sum(m[:n])][m] = c
    out = []
    for d in sorted(groups):
        comp = num.ring.from_dict(groups[d])
        out.append((d, F.new(comp, den) if F is not None else comp))
    return out


def is_homogeneous(p) -> bool:
    return len(homogeneous_components(_numer(p))) <= 1
