"""Difference fields Q(x)(t0..t{n-1}) with sigma(x) = x + 1 and sigma(T) = A T.

Row convention: ``sigma(t_j) = sum_k A[j][k] * t_k``.
"""

from __future__ import annotations

import threading
from functools import reduce

from . import multipoly as mp
from .linalg import entries, identity, matrix
from .scalar import K, QX, XRat, taylor_shift, to_xrat, xrat_parts
from .shift import sigma_x


class NotInvertible(ValueError):
    pass


class NonlinearSystem(ValueError):
    pass


def _coerce_entry(v) -> XRat:
    if hasattr(v, "field") and v.field is not K:
        try:
            return mp.to_xrat(v)
        except ValueError:
            raise NonlinearSystem("matrix entries must not involve t (nonlinear recurrence)") from None
    if hasattr(v, "ring") and v.ring is not QX:
        try:
            return K(mp.x_part(v))
        except ValueError:
            raise NonlinearSystem("matrix entries must not involve t (nonlinear recurrence)") from None
    return to_xrat(v)


def _sigma_matrix(M, k: int):
    return matrix([[sigma_x(v, k) for v in row] for row in entries(M)])


class ShiftSystem:
    """The automorphism ``sigma`` given by an invertible matrix over Q(x).

    Values are immutable; matrix powers and the inverse are cached behind a
    lock, so a system can be shared across threads.
    """

    def __init__(self, A, companion: bool = False):
        rows = [[_coerce_entry(v) for v in row] for row in A]
        n = len(rows)
        if n < 1 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        M = matrix(rows)
        if not M.det():
            raise NotInvertible("system not invertible")
        self.n = n
        self.companion = companion
        self._A = M
        self._lock = threading.Lock()
        self._pow = {0: identity(n), 1: M}
        self._subst: dict[int, tuple] = {}

    @property
    def A(self) -> list[list[XRat]]:
        return entries(self._A)

    @property
    def field(self):
        return mp.field(self.n)

    @property
    def is_constant_matrix(self) -> bool:
        return all(v.numer.is_ground and v.denom.is_ground for row in self.A for v in row)

    def __repr__(self) -> str:
        kind = "companion" if self.companion else "matrix"
        return f"ShiftSystem({kind}, A={self.A})"

    def matrix_power(self, k: int):
        """DomainMatrix of ``sigma^k`` on the t-vector (any integer ``k``)."""
        with self._lock:
            if k in self._pow:
                return self._pow[k]
        if k > 0:
            prev = self.matrix_power(k - 1)
            M = _sigma_matrix(self._A, k - 1) * prev
        else:
            # sigma^{-1}(T) = B T with B = sigma^{-1}(A^{-1})
            B = self.matrix_power(-1) if k < -1 else _sigma_matrix(self._A.inv(), -1)
            M = B if k == -1 else _sigma_matrix(B, k + 1) * self.matrix_power(k + 1)
        with self._lock:
            self._pow[k] = M
        return M

    def substitution(self, k: int) -> tuple[list, object]:
        """``(forms, d)`` with ``sigma^k(t_j) = forms[j] / d`` over Q[t, x]."""
        with self._lock:
            if k in self._subst:
                return self._subst[k]
        M = entries(self.matrix_power(k))
        n = self.n
        R = mp.ring(n)
        d = reduce(lambda a, b: a.lcm(b), (xrat_parts(v)[1] for row in M for v in row), QX.one)
        ts = mp.tgens(n)
        forms = []
        for row in M:
            f = R.zero
            for v, t in zip(row, ts):
                if v:
                    num, den = xrat_parts(v)
                    f += mp.lift_x(num * d.exquo(den), n) * t
            forms.append(f)
        out = (forms, mp.lift_x(d, n))
        with self._lock:
            self._subst[k] = out
        return out


def make_companion(a) -> ShiftSystem:
    """Companion system ``sigma(t_j) = t_{j+1}``, ``sigma(t_{n-1}) = sum a_i t_i``."""
    a = [_coerce_entry(v) for v in a]
    n = len(a)
    if n < 1:
        raise ValueError("need at least one coefficient")
    if not a[0]:
        raise NotInvertible("system not invertible")
    rows = [[K.one if k == j + 1 else K.zero for k in range(n)] for j in range(n - 1)]
    rows.append(a)
    return ShiftSystem(rows, companion=True)


def make_general(A) -> ShiftSystem:
    return ShiftSystem(A, companion=False)


def sigma_poly(sys: ShiftSystem, P, k: int) -> tuple:
    """``sigma^k`` of a ring element as ``(num, den)`` over Q[t, x]."""
    n = sys.n
    R = mp.ring(n)
    if k == 0 or not P:
        return P, R.one
    forms, d = sys.substitution(k)
    D = mp.t_degree(P)
    xk = taylor_shift(QX.gens[0], k)
    xk = mp.lift_x(xk, n)
    cache: dict = {}

    def power(key, base, e):
        if e == 0:
            return R.one
        kk = (key, e)
        if kk not in cache:
            cache[kk] = base**e
        return cache[kk]

    out = R.zero
    for m, c in P.terms():
        term = power("x", xk, m[n]) * power("d", d, D - sum(m[:n]))
        for j in range(n):
            if m[j]:
                term = term * power(j, forms[j], m[j])
        out += term * c
    return out, power("d", d, D)


def apply_sigma(sys: ShiftSystem, f, k: int = 1):
    """``sigma^k(f)`` for a field or ring element; returns a field element."""
    F = sys.field
    if not hasattr(f, "numer"):
        f = F(f)
    if k == 0:
        return f
    an, ad = sigma_poly(sys, f.numer, k)
    bn, bd = sigma_poly(sys, f.denom, k)
    return F.new(an * bd, ad * bn)


def delta(sys: ShiftSystem, f):
    if not hasattr(f, "numer"):
        f = sys.field(f)
    return apply_sigma(sys, f, 1) - f


def system_power(sys: ShiftSystem, s: int) -> list[list[XRat]]:
    """The matrix ``A_(s)`` of ``sigma^s`` on the t-variables."""
    if s < 1:
        raise ValueError("s must be positive")
    return entries(sys.matrix_power(s))


def is_constant(sys: ShiftSystem, f) -> bool:
    if not hasattr(f, "numer"):
        f = sys.field(f)
    return apply_sigma(sys, f, 1) == f

