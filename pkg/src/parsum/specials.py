"""Discovery of linear special polynomials.

Constant systems use left eigenvectors directly. General systems reduce the
dual system ``sigma^s(V) = u * (A_(s)^T)^{-1} V`` to a scalar operator with a
cyclic vector and look for hypergeometric solutions with Petkovsek's Hyper.
Special polynomials of t-degree two or more are not searched for.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from math import comb

from . import multipoly as mp
from .classify import OreOperator, Special, special_test
from .field import ShiftSystem
from .linalg import entries, matrix, nullspace
from .scalar import QQ, QX, X, K, XRat, poly_key, factor_x, integer_roots, monic_divisors, rational_roots, scale_x, xrat_parts
from .shift import sigma_x

# capability flag: only t-degree one specials are discovered
SUPPORTS_NONLINEAR_SPECIALS = False


class IrrationalEigenvalues(ValueError):
    pass


class CyclicVectorFailure(ValueError):
    pass


@dataclass(frozen=True)
class HypergeomCert:
    """``sigma(y) = ratio * y`` for a solution ``y`` of the operator.

    ``multiplicity_free`` is False when several independent solutions share the
    same ratio up to rational factors (the polynomial part had a solution space
    of dimension above one).
    """

    ratio: XRat
    multiplicity_free: bool = True


def _poly_coeffs(L: OreOperator) -> list:
    """Clear denominators: coefficients of ``L`` as polynomials in x."""
    dens = [xrat_parts(c)[1] for c in L.coeffs if c]
    lcm = reduce(lambda a, b: a.lcm(b), dens, QX.one)
    out = []
    for c in L.coeffs:
        num, den = xrat_parts(c)
        out.append(num * lcm.exquo(den) if c else QX.zero)
    return out


def _falling(N, j):
    out = QX.one
    for i in range(j):
        out *= N - i
    return out


def polynomial_solutions(betas: list) -> list:
    """Basis of polynomial ``c`` with ``sum_k betas[k] * c(x+k) = 0``."""
    s = len(betas) - 1
    gammas = []
    for j in range(s + 1):
        g = QX.zero
        for k in range(j, s + 1):
            g += betas[k] * comb(k, j)
        gammas.append(g)
    live = [(j, g) for j, g in enumerate(gammas) if g]
    if not live:
        return []
    top = max(g.degree() - j for j, g in live)
    N = X
    ind = QX.zero
    for j, g in live:
        if g.degree() - j == top:
            ind += g.LC * _falling(N, j)
    roots = [r for r in integer_roots(ind) if r >= 0] if ind else []
    if not roots:
        return []
    bound = max(roots)
    # unknown coefficients c_0..c_bound; compare coefficients of the image
    cols = []
    for e in range(bound + 1):
        img = QX.zero
        for k, b in enumerate(betas):
            if b:
                img += b * (X + k) ** e
        cols.append(img)
    maxdeg = max((c.degree() for c in cols if c), default=0)
    vecs = [[dict(c.terms()).get((d,), QQ(0)) for d in range(maxdeg + 1)] for c in cols]
    basis = nullspace(vecs, QQ)
    return [QX.from_dict({(e,): v for e, v in enumerate(vec) if v}) for vec in basis]


def _apply_ratio(coeffs: list, r: XRat) -> XRat:
    """``sum c_k prod_{j<k} sigma^j(r)``: zero iff hyperexponential ``r`` solves."""
    out, prod = K.zero, K.one
    for k, c in enumerate(coeffs):
        out += c * prod
        prod *= sigma_x(r, k)
    return out


def hypergeometric_solutions(L: OreOperator) -> list[HypergeomCert]:
    """All hypergeometric solutions of ``L`` over Q, by certificate."""
    if not L.coeffs[0]:
        raise ValueError("operator must have nonzero trailing coefficient")
    s = L.order
    if s == 0:
        return []
    p = _poly_coeffs(L)
    _, fa = factor_x(p[0])
    _, fb = factor_x(sigma_x(p[s], 1 - s))
    found: dict = {}
    for a in monic_divisors(fa):
        for b in monic_divisors(fb):
            alphas = []
            for k in range(s + 1):
                v = p[k]
                for j in range(k):
                    v *= sigma_x(a, j)
                for j in range(k, s):
                    v *= sigma_x(b, j)
                alphas.append(v)
            d = max(al.degree() for al in alphas if al)
            zpoly = QX.zero
            for k, al in enumerate(alphas):
                if al and al.degree() == d:
                    zpoly += al.LC * X**k
            if zpoly.is_ground:
                continue
            for z in rational_roots(zpoly):
                if not z:
                    continue
                betas = [al * z**k for k, al in enumerate(alphas)]
                sols = polynomial_solutions(betas)
                for c in sols:
                    r = K(z) * K(a) / K(b) * K(sigma_x(c, 1)) / K(c)
                    if poly_key(r) not in found:
                        found[poly_key(r)] = (r, len(sols) == 1)
    out = []
    for r, mf in found.values():
        if _apply_ratio(list(L.coeffs), r) != 0:
            raise AssertionError(f"certificate {r} does not annihilate the operator")
        out.append(HypergeomCert(r, mf))
    out.sort(key=lambda c: str(c.ratio))
    return out


def normalize_linear_form(form):
    """Scale a linear form in t to be x-primitive with the coefficient of its
    highest-index variable monic in x."""
    form = mp.normalize_assoc(form.numer if hasattr(form, "numer") else form)
    n = mp.nvars(form)
    cs = mp.t_coeffs(form)
    for j in range(n - 1, -1, -1):
        key = tuple(1 if i == j else 0 for i in range(n))
        if key in cs:
            return form.quo_ground(cs[key].LC)
    return form


def cfinite_specials(sys: ShiftSystem) -> list[tuple[object, object]]:
    """Linear forms ``w.T`` with ``sigma(w.T) = lam * w.T`` for rational ``lam``.

    Returns the forms for all rational eigenvalues, largest eigenvalue first;
    raises IrrationalEigenvalues when there is none.
    """
    if not sys.is_constant_matrix:
        raise ValueError("cfinite_specials needs a constant matrix")
    n = sys.n
    rows = [[v.numer.LC / v.denom.LC if v else QQ(0) for v in row] for row in sys.A]
    cp = matrix(rows, QQ).charpoly()
    chi = QX.from_dict({(n - i,): c for i, c in enumerate(cp) if c})
    lams = rational_roots(chi)
    if not lams:
        raise IrrationalEigenvalues(f"no rational eigenvalues; characteristic polynomial {chi}")
    R = mp.ring(n)
    ts = mp.tgens(n)
    out = []
    for lam in sorted(lams, reverse=True):
        # w A = lam w, i.e. columns of (A - lam I) dotted with w vanish
        cols = [[rows[j][k] - (lam if j == k else 0) for k in range(n)] for j in range(n)]
        for w in nullspace(cols, QQ):
            form = sum((R(w[j]) * ts[j] for j in range(n)), R.zero)
            out.append((normalize_linear_form(form), lam))
    return out


def _cyclic_reduction(B, rng: random.Random) -> tuple[list, OreOperator]:
    """Cyclic vector for ``tau(Y) = B Y``: rows ``C`` and the scalar operator."""
    n = len(B)
    Bm = matrix(B)
    trials = [[K.one if i == j else K.zero for i in range(n)] for j in range(n)]
    for _ in range(20):
        trials.append([K(rng.randint(-3, 3)) for _ in range(n)])
    for c in trials:
        if not any(c):
            continue
        rows = [c]
        for _ in range(n):
            nxt = matrix([[sigma_x(v, 1) for v in rows[-1]]]) * Bm
            rows.append(entries(nxt)[0])
        C = matrix(rows[:n])
        if not C.det():
            continue
        # rows[n] = sum alpha_k rows[k]
        alpha = entries(matrix([rows[n]]) * C.inv())[0]
        op = OreOperator(tuple([-a for a in alpha] + [K.one]))
        if not op.coeffs[0]:
            continue
        return rows[:n], op
    raise CyclicVectorFailure("no cyclic vector found; retry with another seed")


def find_linear_specials(sys: ShiftSystem, max_s: int | None = None, seed: int = 0) -> list[tuple[object, int, XRat]]:
    """Linear ``w.T`` with ``sigma^ell(w.T) = unit * w.T`` for ``ell <= max_s``.

    The result may be incomplete; each entry is checked with special_test.
    """
    n = sys.n
    max_s = n if max_s is None else max_s
    if max_s < 1:
        raise ValueError("max_s must be positive")
    rng = random.Random(seed)
    R = mp.ring(n)
    ts = mp.tgens(n)
    found: dict = {}
    for s in range(1, max_s + 1):
        As = entries(sys.matrix_power(s))
        if all(As[i][j] == (As[0][0] if i == j else 0) for i in range(n) for j in range(n)):
            # scalar A_(s): no cyclic vector exists and every t_j is special
            for t in ts:
                cls = special_test(sys, t)
                k = poly_key(t)
                if k not in found or cls.ell < found[k][1].ell:
                    found[k] = (t, cls)
            continue
        # sigma^s(V) = u * B V with B = (A_(s)^T)^{-1}; rescale x = s z
        Bt = matrix([[As[j][i] for j in range(n)] for i in range(n)]).inv()
        B = [[scale_x(v, s) for v in row] for row in entries(Bt)]
        rows, op = _cyclic_reduction(B, rng)
        Cinv = entries(matrix(rows).inv())
        for cert in hypergeometric_solutions(op):
            r = cert.ratio
            ys = [K.one]
            for k in range(1, n):
                ys.append(ys[-1] * sigma_x(r, k - 1))
            V = [sum((Cinv[i][k] * ys[k] for k in range(n)), K.zero) for i in range(n)]
            V = [scale_x(v, QQ(1, s)) for v in V]
            den = reduce(lambda a, b: a.lcm(b), (xrat_parts(v)[1] for v in V), QX.one)
            form = R.zero
            for j, v in enumerate(V):
                if v:
                    num, d = xrat_parts(v)
                    form += mp.lift_x(num * den.exquo(d), n) * ts[j]
            if not form:
                continue
            form = normalize_linear_form(form)
            cls = special_test(sys, form)
            if not isinstance(cls, Special):
                raise AssertionError(f"discovered form {form} is not special")
            k = poly_key(form)
            if k not in found or cls.ell < found[k][1].ell:
                found[k] = (form, cls)
    out = [(f, c.ell, c.unit) for f, c in found.values()]
    out.sort(key=lambda t: (t[1], mp.sort_key(t[0])))
    return out
