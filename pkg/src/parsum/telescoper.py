"""Parallel summation: find ``g`` in F with ``sigma(g) - g = f``.

Pipeline: classify the denominator of ``f``, bound the normal part of the
denominator of ``g`` via the dispersion, guess the special part with a fixed
slack, then solve a linear system for the numerator and verify.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from . import multipoly as mp
from .classify import (
    DEFAULT_SHIFT_SCAN,
    NEG_INF,
    SplitFactorization,
    orbit_decomposition,
    split_factorization,
)
from .field import ShiftSystem, delta, sigma_poly
from .linalg import solve_sparse
from .scalar import QQ, XPoly, poly_key, taylor_shift
from .specials import CyclicVectorFailure, find_linear_specials

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TelescopeConfig:
    max_t_degree: int = 8
    max_x_degree: int = 12
    special_slack: int = 2
    max_shift_scan: int = DEFAULT_SHIFT_SCAN
    discover_specials: bool = True
    x_denominator: XPoly | None = None
    factored_input: bool = False

    def __post_init__(self):
        for name in ("max_t_degree", "max_x_degree", "special_slack", "max_shift_scan"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class DispersionZero:
    """Certificate: every normal orbit of the denominator is a single shift."""

    normal_factors: int


@dataclass(frozen=True)
class Found:
    g: object


@dataclass(frozen=True)
class NotSummable:
    certificate: DispersionZero


@dataclass(frozen=True)
class Inconclusive:
    exhausted: str


TelescopeResult = Found | NotSummable | Inconclusive


class NoSolutionWithinBounds(RuntimeError):
    def __init__(self, t_degree: int, x_degree: int):
        super().__init__(f"no numerator with t-degree <= {t_degree} and x-degree <= {x_degree}")
        self.t_degree = t_degree
        self.x_degree = x_degree


def _numer(p):
    return p.numer if hasattr(p, "numer") else p


def _factors_of(sys, P, factors=None) -> list[tuple[object, int]]:
    if factors is not None:
        return [(mp.normalize_assoc(_numer(f)), m) for f, m in factors if not mp.is_tfree(_numer(f))]
    if mp.is_tfree(_numer(P)):
        return []
    return mp.factor_t(_numer(P))[1]


def _shifted_counter(sys, factors, shifts) -> tuple[Counter, dict]:
    c: Counter = Counter()
    rep = {}
    for f, m in factors:
        for i in shifts:
            num, _ = sigma_poly(sys, f, i)
            g = mp.normalize_assoc(num)
            c[poly_key(g)] += m
            rep[poly_key(g)] = g
    return c, rep


def normal_denominator_bound(sys: ShiftSystem, v_n, d, factors=None):
    """``gcd(prod_{i<=d} sigma^i(v_n), prod_{i<=d} sigma^{-i-1}(v_n))``, normalized.

    Computed factorwise: sigma maps irreducibles to irreducibles, so the gcd is
    the product of common shifted factors with the smaller multiplicity.
    """
    R = mp.ring(sys.n)
    if d == NEG_INF or d < 0:
        return R.one
    fs = _factors_of(sys, v_n, factors)
    up, rep = _shifted_counter(sys, fs, range(0, d + 1))
    down, _ = _shifted_counter(sys, fs, range(-d - 1, 0))
    out = R.one
    for k in sorted(up.keys() & down.keys(), key=lambda k: mp.sort_key(rep[k])):
        out *= rep[k] ** min(up[k], down[k])
    return out


def special_denominator_guess(sys: ShiftSystem, special_factors, discovered, config: TelescopeConfig):
    """Special factors of ``f`` with multiplicity plus slack, times each newly
    discovered linear special to the power of the slack."""
    R = mp.ring(sys.n)
    out = R.one
    seen = []
    for item in special_factors:
        f, m = item[0], item[1]
        f = mp.normalize_assoc(_numer(f))
        seen.append(f)
        out *= f ** (m + config.special_slack)
    if config.discover_specials and config.special_slack:
        for item in discovered:
            f = mp.normalize_assoc(_numer(item[0]))
            if f in seen:
                continue
            seen.append(f)
            out *= f**config.special_slack
    return out


@dataclass(frozen=True)
class NumeratorEquation:
    """``A1 * sigma(U) - A2 * U = b`` over Q[t, x]."""

    A1: object
    A2: object
    b: object


def reduce_to_numerator_equation(sys: ShiftSystem, f, D) -> NumeratorEquation:
    """Clear denominators in ``sigma(U)/sigma(D) - U/D = f`` and cancel the
    common factor of the three coefficients."""
    F = sys.field
    f = f if hasattr(f, "numer") else F(f)
    D = _numer(D)
    if not D:
        raise ValueError("zero denominator")
    Dn1, dd = sigma_poly(sys, D, 1)
    fn, fd = f.numer, f.denom
    L = Dn1.lcm(D).lcm(fd)
    A1 = dd * L.exquo(Dn1)
    A2 = L.exquo(D)
    b = fn * L.exquo(fd)
    g = A1.gcd(A2)
    if b:
        g = g.gcd(b)
    A1, A2, b = A1.exquo(g), A2.exquo(g), b.exquo(g)
    lc = A1.LC
    return NumeratorEquation(A1.quo_ground(lc), A2.quo_ground(lc), b.quo_ground(lc))


def _tmonomials(n: int, deg: int) -> list[tuple]:
    out = []
    for combo in combinations_with_replacement(range(n), deg):
        m = [0] * n
        for j in combo:
            m[j] += 1
        out.append(tuple(m))
    return sorted(out, reverse=True)


class _Ansatz:
    """Images of ansatz monomials ``x^j t^e`` under ``U -> A1 sigma(U) - A2 U``,
    all scaled by a common polynomial so that they lie in Q[t, x]."""

    def __init__(self, sys: ShiftSystem, eq: NumeratorEquation, top: int, xden: XPoly | None):
        self.sys = sys
        n = self.n = sys.n
        R = self.R = mp.ring(n)
        self.eq = eq
        self.top = top
        forms, d = sys.substitution(1)
        self.forms, self.d = forms, d
        self.dpow = [d**k for k in range(top + 1)]
        self.x = mp.xgen(n)
        self.x1 = self.x + 1
        if xden is not None:
            self.h = mp.lift_x(xden, n)
            self.h1 = mp.lift_x(taylor_shift(xden, 1), n)
        else:
            self.h = self.h1 = R.one
        # equation times h * sigma(h) * d^top
        self.left = eq.A1 * self.h
        self.right = eq.A2 * self.h1 * self.dpow[top]
        self.rhs = eq.b * self.h * self.h1 * self.dpow[top]
        self._tcache: dict = {}
        self._img: dict = {}

    def _sigma_t(self, e: tuple):
        if e not in self._tcache:
            out = self.R.one
            for j, k in enumerate(e):
                if k:
                    out *= self.forms[j] ** k
            self._tcache[e] = out * self.dpow[self.top - sum(e)]
        return self._tcache[e]

    def image(self, j: int, e: tuple):
        key = (j, e)
        if key not in self._img:
            t = self.R.from_dict({e + (0,): QQ(1)})
            self._img[key] = self.left * self.x1**j * self._sigma_t(e) - self.right * self.x**j * t
        return self._img[key]

    def solve(self, degrees: list[int], dx: int):
        basis = [(j, e) for deg in degrees for e in _tmonomials(self.n, deg) for j in range(dx + 1)]
        rows: dict = {}
        for col, (j, e) in enumerate(basis):
            for m, c in self.image(j, e).terms():
                rows.setdefault(m, {})[col] = c
        rhs_terms = dict(self.rhs.terms())
        keys = list(rows.keys() | rhs_terms.keys())
        sol = solve_sparse([rows.get(k, {}) for k in keys], [rhs_terms.get(k, QQ(0)) for k in keys], len(basis))
        if sol is None:
            return None
        U = self.R.zero
        for col, v in sol.items():
            j, e = basis[col]
            U += self.R.from_dict({e + (j,): v})
        return U


def _degree_window(D, f) -> tuple[int, int]:
    fn, fd = f.numer, f.denom
    lo = mp.t_order(D) + (mp.t_order(fn) - mp.t_degree(fd) if fn else 0)
    hi = mp.t_degree(D) + (mp.t_degree(fn) - mp.t_order(fd) if fn else 0)
    return max(0, lo), max(0, hi)


def _x_schedule(cap: int) -> list[int]:
    out, k = [], 0
    while k < cap:
        out.append(k)
        k = 1 if k == 0 else 2 * k
    out.append(cap)
    return out


def solve_numerator(sys: ShiftSystem, eq: NumeratorEquation, config: TelescopeConfig, window: tuple[int, int] | None = None):
    """Polynomial ``U`` with ``A1 sigma(U) - A2 U = b`` by iterative deepening.

    Returns ``U`` as an element of ``field(n)`` (which carries the optional x
    denominator); raises NoSolutionWithinBounds when the caps are exhausted.
    """
    F = sys.field
    if not eq.b:
        return F.zero
    lo, hi = window if window is not None else (0, mp.t_degree(eq.b))
    lo, hi = min(lo, config.max_t_degree), min(hi, config.max_t_degree)
    widen = 0
    while True:
        a, b = max(0, lo - widen), min(config.max_t_degree, hi + widen)
        ans = _Ansatz(sys, eq, b, config.x_denominator)
        for dx in _x_schedule(config.max_x_degree):
            log.debug("ansatz degrees %d..%d, x-degree %d", a, b, dx)
            U = ans.solve(list(range(a, b + 1)), dx)
            if U is not None:
                out = F(U)
                if config.x_denominator is not None:
                    out = out / mp.from_x(config.x_denominator, sys.n)
                return out
        if a == 0 and b == config.max_t_degree:
            raise NoSolutionWithinBounds(config.max_t_degree, config.max_x_degree)
        widen += 1


def verify(sys: ShiftSystem, g, f) -> bool:
    F = sys.field
    g = g if hasattr(g, "numer") else F(g)
    f = f if hasattr(f, "numer") else F(f)
    return delta(sys, g) == f


@dataclass
class SumReport:
    """Intermediate data of a parallel_sum run, for display."""

    split: SplitFactorization | None = None
    dispersion: int | float = NEG_INF
    bound: object = None
    special_guess: object = None
    denominator: object = None
    equation: NumeratorEquation | None = None
    discovered: list = field(default_factory=list)


def parallel_sum(sys: ShiftSystem, f, config: TelescopeConfig | None = None, denfactors=None, report: SumReport | None = None):
    """Decide summability of ``f``; ``Found`` results are verified exactly."""
    config = config or TelescopeConfig()
    F = sys.field
    f = f if hasattr(f, "numer") else F(f)
    report = report if report is not None else SumReport()
    if not f:
        return Found(F.zero)
    cache: dict = {}
    den = f.denom
    if mp.is_tfree(den):
        split = SplitFactorization(mp.to_xrat(F(den)), ())
    else:
        split = split_factorization(sys, den, denfactors if config.factored_input else None, cache)
    report.split = split
    normals = split.normal_factors()
    if normals:
        table = orbit_decomposition(sys, [p for p, _ in normals], config.max_shift_scan, cache=cache)
        disp = max(max(m.offset for m in g) - min(m.offset for m in g) for g in table.orbits)
    else:
        disp = NEG_INF
    report.dispersion = disp
    if disp == 0:
        return NotSummable(DispersionZero(len(normals)))
    d = disp - 1 if disp != NEG_INF else NEG_INF
    bound = normal_denominator_bound(sys, split.normal_part(sys.n), d, normals)
    discovered = []
    if config.discover_specials:
        try:
            discovered = find_linear_specials(sys)
        except CyclicVectorFailure:
            log.warning("cyclic vector search failed; no specials discovered")
    report.discovered = discovered
    guess = special_denominator_guess(sys, [(p, m) for p, m, _ in split.special_factors()], discovered, config)
    D = mp.normalize_assoc(bound * guess)
    report.bound, report.special_guess, report.denominator = bound, guess, D
    eq = reduce_to_numerator_equation(sys, f, D)
    report.equation = eq
    try:
        U = solve_numerator(sys, eq, config, _degree_window(D, f))
    except NoSolutionWithinBounds as exc:
        return Inconclusive(f"t-degree <= {exc.t_degree}, x-degree <= {exc.x_degree}")
    g = U / F(D)
    if not verify(sys, g, f):
        raise AssertionError("numerator solution failed verification")
    return Found(g)
