"""Special/normal classification, annihilating operators, sigma-equivalence,
orbits and dispersion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from . import multipoly as mp
from .field import ShiftSystem, apply_sigma, sigma_poly
from .linalg import matrix, nullspace
from .scalar import QQ, QX, K, XRat, is_constant, poly_key, qq, rational_roots, xrat_parts
from .shift import Unique, gp_form, sigma_x, solve_shift

NEG_INF = float("-inf")
DEFAULT_SHIFT_SCAN = 25


@dataclass(frozen=True)
class Special:
    ell: int
    unit: XRat


@dataclass(frozen=True)
class Normal:
    pass


FactorClass = Special | Normal


@dataclass(frozen=True)
class Equivalent:
    i: int
    u: XRat


@dataclass(frozen=True)
class NotEquivalent:
    pass


EquivalenceResult = Equivalent | NotEquivalent


class UnsupportedEigenvalues(ValueError):
    """The constant-coefficient branch needs eigenvalues outside Q."""


@dataclass(frozen=True)
class OreOperator:
    """Monic ``S^s + c_{s-1} S^{s-1} + ... + c_0`` with coefficients in Q(x)."""

    coeffs: tuple[XRat, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, c in enumerate(self.coeffs) if c)

    def is_constant(self) -> bool:
        return all(is_constant(c) for c in self.coeffs)

    def apply(self, sys: ShiftSystem, p):
        out = sys.field.zero
        for k, c in enumerate(self.coeffs):
            if c:
                out += mp.from_x(c, sys.n) * apply_sigma(sys, p, k)
        return out

    def __str__(self) -> str:
        parts = []
        for k in range(self.order, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            s = "S" if k == 1 else f"S^{k}" if k else ""
            if c == 1 and k:
                parts.append(s)
            else:
                parts.append(f"({c})" + (f"*{s}" if s else ""))
        return " + ".join(parts)


def _numer(p):
    return p.numer if hasattr(p, "numer") else p


def _sigma_unit(sys: ShiftSystem, p, q, i: int) -> XRat | None:
    """``u`` with ``sigma^i(p) = u * q``, if it exists (p, q ring elements)."""
    num, den = sigma_poly(sys, p, i)
    u = mp.unit_between(num, q)
    if u is None:
        return None
    return u / K(mp.x_part(den))


def special_test(sys: ShiftSystem, p) -> FactorClass:
    """Classify an irreducible polynomial by checking ``sigma^i(p) ~ p``, i <= n."""
    p = _numer(p)
    if mp.is_tfree(p):
        raise ValueError("special_test needs a polynomial depending on t")
    for i in range(1, sys.n + 1):
        u = _sigma_unit(sys, p, p, i)
        if u is not None:
            return Special(i, u)
    return Normal()


def _coeff_vector(f, monos: list[tuple]) -> list[XRat]:
    num, den = f.numer, f.denom
    d = K(mp.x_part(den))
    cs = mp.t_coeffs(num)
    return [K(cs[m]) / d if m in cs else K.zero for m in monos]


def min_annihilator(sys: ShiftSystem, p) -> OreOperator:
    """Monic minimal ``L`` with ``sum c_k sigma^k(p) = 0``.

    The t-monomials occurring in ``sigma^k(p)`` all lie in the homogeneous
    degrees of ``p`` (sigma is linear in t), so the search terminates.
    """
    p = sys.field(_numer(p)) if not hasattr(p, "numer") else p
    if not p:
        raise ValueError("zero has no minimal annihilator")
    n = sys.n
    degs = {d for d, _ in mp.homogeneous_components(p.numer)}
    monos = []
    for d in sorted(degs):
        for combo in combinations_with_replacement(range(n), d):
            m = [0] * n
            for j in combo:
                m[j] += 1
            monos.append(tuple(m))
    vecs = []
    for k in range(len(monos) + 1):
        vecs.append(_coeff_vector(apply_sigma(sys, p, k), monos))
        ns = nullspace(vecs)
        if ns:
            v = ns[0]
            lead = v[-1]
            coeffs = tuple(c / lead for c in v)
            return OreOperator(coeffs)
    raise AssertionError("annihilator search exceeded the space dimension")


def _elim_quantity(coeffs, k: int, s: int) -> XRat:
    lk, l0 = coeffs[k], coeffs[0]
    return (lk / sigma_x(lk, s)) / (sigma_x(l0, k) / sigma_x(l0, s))


def _integer_log(base, value) -> int | None:
    """``i`` with ``base**i == value`` for rationals, ``|base| != 0, 1``."""
    base, value = Fraction(int(base.numerator), int(base.denominator)), Fraction(
        int(value.numerator), int(value.denominator)
    )
    if value == 0 or abs(base) == 1:
        return None
    if abs(base) < 1:
        base, inv = 1 / base, True
    else:
        inv = False
    v = value if not inv else 1 / value
    i, acc = 0, Fraction(1)
    if abs(v) >= 1:
        while abs(acc) < abs(v):
            acc *= base
            i += 1
    else:
        while abs(acc) > abs(v):
            acc /= base
            i -= 1
    if acc != v:
        return None
    return -i if inv else i


def _rational_eigenbasis(sys: ShiftSystem):
    """Left eigenvectors ``W`` (rows) and eigenvalues of a constant ``A`` with
    ``n`` distinct rational eigenvalues; else raise UnsupportedEigenvalues."""
    A = sys.A
    n = sys.n
    rows = [[qq(v.numer.LC) / qq(v.denom.LC) if v else QQ(0) for v in row] for row in A]
    M = matrix(rows, QQ)
    cp = M.charpoly()
    chi = QX.from_dict({(n - i,): c for i, c in enumerate(cp) if c})
    lams = rational_roots(chi)
    if len(lams) != n:
        raise UnsupportedEigenvalues(f"characteristic polynomial {chi} lacks {n} distinct rational roots")
    W = []
    for lam in lams:
        # left eigenvector: w A = lam w  <=>  (A^T - lam) w^T = 0
        cols = [[rows[j][k] - (lam if j == k else 0) for j in range(n)] for k in range(n)]
        ns = nullspace([list(c) for c in zip(*cols)], QQ)
        W.append(ns[0])
    return W, lams


def _eigen_coords(sys: ShiftSystem, p, W) -> dict[tuple, XRat]:
    """Coefficients of ``p`` in the eigen-coordinates ``y_k = w_k . T``."""
    n = sys.n
    R = mp.ring(n)
    Winv = matrix(W, QQ).inv().to_list()
    ts = mp.tgens(n)
    # T = Winv Y; substitute t_j -> sum_k Winv[j][k] y_k, reusing t-symbols as y
    subs = [sum((R(Winv[j][k]) * ts[k] for k in range(n)), R.zero) for j in range(n)]
    q = p.compose(list(zip(ts, subs)))
    return {m: K(c) for m, c in mp.t_coeffs(q).items()}


def _cfinite_candidate(sys, p, q, W, lams) -> int | None | str:
    """Candidate shift from the eigen-coordinate comparison.

    Returns an int candidate, ``None`` for proven non-equivalence, or
    ``"undecided"`` when every pair is degenerate.
    """
    cp = _eigen_coords(sys, p, W)
    cq = _eigen_coords(sys, q, W)
    if cp.keys() != cq.keys():
        return None

    def mu(m):
        out = QQ(1)
        for lam, e in zip(lams, m):
            out *= lam**e
        return out

    keys = sorted(cp)
    for m1, m2 in combinations(keys, 2):
        rho = mu(m1) / mu(m2)
        a = cp[m1] / cp[m2]
        b = cq[m1] / cq[m2]
        if not is_constant(a):
            an, ad = xrat_parts(a)
            bn, bd = xrat_parts(b)
            na, nb = K(an.monic()) / K(ad), K(bn.monic()) / K(bd)
            r = solve_shift(na, nb)
            return r.i if isinstance(r, Unique) else None
        if rho == 1 or rho == -1:
            continue
        ratio = b / a
        if not is_constant(ratio):
            return None
        ratio = ratio.numer.LC / ratio.denom.LC
        return _integer_log(rho, ratio)
    return "undecided"


def _scan_order(bound: int):
    yield 0
    for i in range(1, bound + 1):
        yield i
        yield -i


def _annihilator(sys, p, cache):
    key = ("L", poly_key(p))
    if cache is not None and key in cache:
        return cache[key]
    L = min_annihilator(sys, p)
    if cache is not None:
        cache[key] = L
    return L


def _class_of(sys, p, cache):
    key = ("C", poly_key(p))
    if cache is not None and key in cache:
        return cache[key]
    c = special_test(sys, p)
    if cache is not None:
        cache[key] = c
    return c


def sigma_equivalent(
    sys: ShiftSystem,
    p,
    q,
    max_shift_scan: int = DEFAULT_SHIFT_SCAN,
    fallback_scan: bool = True,
    cache: dict | None = None,
) -> EquivalenceResult:
    """Decide whether ``sigma^i(p) = u*q`` for some integer ``i`` and ``u`` in Q(x).

    Every returned ``Equivalent`` is checked by substitution. When the exact
    decision needs irrational eigenvalues, a scan over ``|i| <= max_shift_scan``
    is used if ``fallback_scan`` is set; otherwise UnsupportedEigenvalues is raised.
    """
    p0, q0 = _numer(p), _numer(q)
    if mp.is_tfree(p0) or mp.is_tfree(q0):
        raise ValueError("sigma_equivalent needs polynomials depending on t")
    P, Q = mp.normalize_assoc(p0), mp.normalize_assoc(q0)

    def verified(i):
        u = _sigma_unit(sys, p0, q0, i)
        return Equivalent(i, u) if u is not None else None

    if mp.t_degree(P) != mp.t_degree(Q) or [d for d, _ in mp.homogeneous_components(P)] != [
        d for d, _ in mp.homogeneous_components(Q)
    ]:
        return NotEquivalent()

    cp, cq = _class_of(sys, P, cache), _class_of(sys, Q, cache)
    if isinstance(cp, Special) or isinstance(cq, Special):
        if not (isinstance(cp, Special) and isinstance(cq, Special)):
            return NotEquivalent()
        for i in range(cp.ell):
            r = verified(i)
            if r is not None:
                return r
        return NotEquivalent()

    if P == Q:
        return verified(0)

    # steps 1-2: annihilators and their supports
    L, M = _annihilator(sys, P, cache), _annihilator(sys, Q, cache)
    if L.order != M.order or L.support() != M.support():
        return NotEquivalent()
    s = L.order

    # steps 4-6: the gauge-invariant quantities of the elimination lemma
    for k in range(1, s):
        if not L.coeffs[k]:
            continue
        a = _elim_quantity(L.coeffs, k, s)
        b = _elim_quantity(M.coeffs, k, s)
        if is_constant(a) and is_constant(b):
            if a != b:
                return NotEquivalent()
            continue
        r = solve_shift(a, b)
        if not isinstance(r, Unique):
            return NotEquivalent()
        return verified(r.i) or NotEquivalent()

    # steps 7-9: compare shift-sensitive parts of the trailing coefficients;
    # the outcome is only a candidate since these parts move under gauge changes
    g1, g2 = gp_form(L.coeffs[0]), gp_form(M.coeffs[0])
    bc1, bc2 = K(g1.b) / K(g1.c), K(g2.b) / K(g2.c)
    if bc1 != 1 or bc2 != 1:
        r = solve_shift(bc1, bc2)
        if isinstance(r, Unique):
            res = verified(r.i)
            if res is not None:
                return res

    # steps 10-14: constant systems via eigen-coordinates
    if sys.is_constant_matrix:
        try:
            W, lams = _rational_eigenbasis(sys)
        except UnsupportedEigenvalues:
            if not fallback_scan:
                raise
        else:
            cand = _cfinite_candidate(sys, P, Q, W, lams)
            if cand is None:
                return NotEquivalent()
            if cand != "undecided":
                return verified(cand) or NotEquivalent()
    elif not fallback_scan:
        raise UnsupportedEigenvalues("no exact criterion applies to this pair")

    for i in _scan_order(max_shift_scan):
        res = verified(i)
        if res is not None:
            return res
    return NotEquivalent()


@dataclass(frozen=True)
class SplitFactorization:
    """``unit * prod(f**m)`` with every factor classified."""

    unit: XRat
    factors: tuple[tuple[object, int, FactorClass], ...]

    def special_part(self, n: int):
        out = mp.ring(n).one
        for f, m, c in self.factors:
            if isinstance(c, Special):
                out *= f**m
        return out

    def normal_part(self, n: int):
        out = mp.ring(n).one
        for f, m, c in self.factors:
            if isinstance(c, Normal):
                out *= f**m
        return out

    def normal_factors(self) -> list[tuple[object, int]]:
        return [(f, m) for f, m, c in self.factors if isinstance(c, Normal)]

    def special_factors(self) -> list[tuple[object, int, Special]]:
        return [(f, m, c) for f, m, c in self.factors if isinstance(c, Special)]


def split_factorization(sys: ShiftSystem, P, factors=None, cache: dict | None = None) -> SplitFactorization:
    """Classify each irreducible factor of ``P``.

    ``factors`` may supply a trusted factorization ``[(f, m), ...]`` of the
    t-part, in which case ``P`` only fixes the unit.
    """
    n = sys.n
    Pn = _numer(P) if not hasattr(P, "numer") or mp.is_tpoly(P) else None
    if Pn is None:
        raise ValueError("split_factorization needs a polynomial in t")
    if factors is None:
        unit, fs = mp.factor_t(P)
    else:
        fs = [(mp.normalize_assoc(_numer(f)), m) for f, m in factors if not mp.is_tfree(_numer(f))]
        prod = mp.ring(n).one
        for f, m in fs:
            prod *= f**m
        whole = P if hasattr(P, "numer") else sys.field(P)
        ratio = whole / sys.field(prod)
        if not mp.is_tfree(ratio.numer) or not mp.is_tfree(ratio.denom):
            raise ValueError("supplied factors do not multiply to the polynomial")
        unit = mp.to_xrat(ratio)
        fs = _merge(fs)
    out = [(f, m, _class_of(sys, f, cache)) for f, m in fs]
    out.sort(key=lambda t: mp.sort_key(t[0]))
    return SplitFactorization(unit, tuple(out))


def _merge(fs):
    acc: dict = {}
    for f, m in fs:
        k = poly_key(f)
        acc[k] = (f, acc[k][1] + m if k in acc else m)
    return list(acc.values())


@dataclass(frozen=True)
class OrbitMember:
    index: int
    offset: int
    unit: XRat


@dataclass(frozen=True)
class OrbitTable:
    """Groups of ``(index, offset, unit)`` with ``sigma^offset(rep) = unit * factor``.

    The representative of a group is its member with offset 0.
    """

    orbits: tuple[tuple[OrbitMember, ...], ...]

    def group_of(self, index: int) -> int:
        for g, members in enumerate(self.orbits):
            if any(m.index == index for m in members):
                return g
        raise KeyError(index)


def orbit_decomposition(
    sys: ShiftSystem,
    factors: list,
    max_shift_scan: int = DEFAULT_SHIFT_SCAN,
    fallback_scan: bool = True,
    cache: dict | None = None,
) -> OrbitTable:
    """Partition normal irreducible factors into sigma-orbits with relative shifts."""
    polys = [_numer(f) for f in factors]
    groups: list[list[tuple[int, int, XRat]]] = []
    for idx, f in enumerate(polys):
        for g in groups:
            rep = polys[g[0][0]]
            r = sigma_equivalent(sys, rep, f, max_shift_scan, fallback_scan, cache)
            if isinstance(r, Equivalent):
                g.append((idx, r.i, r.u))
                break
        else:
            groups.append([(idx, 0, K.one)])
    orbits = []
    for g in groups:
        m_idx, m_off, m_u = min(g, key=lambda t: t[1])
        members = []
        for idx, off, u in g:
            members.append(OrbitMember(idx, off - m_off, u / sigma_x(m_u, off - m_off)))
        members.sort(key=lambda mm: (mm.offset, mm.index))
        orbits.append(tuple(members))
    return OrbitTable(tuple(orbits))


def _orbit_spans(table: OrbitTable) -> list[int]:
    return [max(m.offset for m in g) - min(m.offset for m in g) for g in table.orbits]


def dispersion(sys: ShiftSystem, Q, factors=None, cache: dict | None = None, **kw) -> int | float:
    """Largest orbit span among the normal irreducible factors; ``-inf`` if none.

    A field element is measured through its denominator.
    """
    if hasattr(Q, "numer") and not mp.is_tpoly(Q):
        Q = Q.denom
    split = split_factorization(sys, Q, factors, cache)
    normals = [f for f, _ in split.normal_factors()]
    if not normals:
        return NEG_INF
    return max(_orbit_spans(orbit_decomposition(sys, normals, cache=cache, **kw)))


def local_dispersion(sys: ShiftSystem, Q, p, factors=None, cache: dict | None = None, **kw) -> int | float:
    """Span of the factors of ``Q`` lying in the orbit of the normal ``p``."""
    if hasattr(Q, "numer") and not mp.is_tpoly(Q):
        Q = Q.denom
    split = split_factorization(sys, Q, factors, cache)
    offsets = []
    for f, _ in split.normal_factors():
        r = sigma_equivalent(sys, p, f, cache=cache, **kw)
        if isinstance(r, Equivalent):
            offsets.append(r.i)
    return max(offsets) - min(offsets) if offsets else NEG_INF

