"""Command-line front end.

Problem files are INI-style::

    # comments start with '#'
    [field]
    n = 2
    companion = -6, 5            # or: matrix = 2, x; 0, 2
    names = t0, t1               # optional

    [summand]
    f = (636*t0^3 + ...)/(2592*...)
    denfactors = 2592*(3*t0-2*t1)^2*(t0-t1)^2*(2*t0-t1)*(t0+t1)   # optional

    [config]
    special_slack = 2

Exit codes: 0 decided, 1 inconclusive, 2 input error.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from dataclasses import dataclass, field

from . import multipoly as mp
from .classify import (
    Equivalent,
    Special,
    UnsupportedEigenvalues,
    dispersion,
    sigma_equivalent,
    split_factorization,
)
from .field import NonlinearSystem, NotInvertible, ShiftSystem, make_companion, make_general
from .multipoly import DegreeTooLarge
from .parse import ParseError, format_factored, format_poly, format_xrat, parse_expression, parse_factors, primitive_integer
from .specials import IrrationalEigenvalues, cfinite_specials, find_linear_specials
from .telescoper import (
    Found,
    Inconclusive,
    NotSummable,
    SumReport,
    TelescopeConfig,
    normal_denominator_bound,
    parallel_sum,
    verify,
)

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


@dataclass
class FieldSpec:
    n: int
    mode: str  # "companion" or "matrix"
    entries: list
    names: list[str] = field(default_factory=list)

    def build(self) -> ShiftSystem:
        if self.mode == "companion":
            return make_companion(self.entries)
        return make_general(self.entries)


@dataclass
class ProblemFile:
    field: FieldSpec
    system: ShiftSystem
    summand: object | None = None
    denfactors: list | None = None
    config: dict = field(default_factory=dict)


def _parse_scalar(text: str):
    e = parse_expression(text, 1, ["_t"])
    if not mp.is_tfree(e.numer) or not mp.is_tfree(e.denom):
        raise InputError(f"coefficient '{text}' must not involve t")
    return mp.to_xrat(e)


def _split_list(text: str, sep: str = ",") -> list[str]:
    return [s.strip() for s in text.split(sep) if s.strip()]


_CONFIG_TYPES = {
    "max_t_degree": int,
    "max_x_degree": int,
    "special_slack": int,
    "max_shift_scan": int,
    "discover_specials": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "factored_input": lambda s: s.strip().lower() in ("1", "true", "yes", "on"),
    "x_denominator": str,
}


def load_problem(path: str) -> ProblemFile:
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",), inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except configparser.Error as exc:
        raise InputError(f"malformed problem file: {exc}") from None
    if not cp.has_section("field"):
        raise InputError("problem file needs a [field] section")
    fs = cp["field"]
    mode = "companion" if "companion" in fs else "matrix" if "matrix" in fs else None
    if mode is None:
        raise InputError("[field] needs 'companion' or 'matrix'")
    try:
        if mode == "companion":
            entries = [_parse_scalar(s) for s in _split_list(fs["companion"])]
            n = len(entries)
        else:
            rows = [_split_list(r) for r in _split_list(fs["matrix"], ";")]
            entries = [[_parse_scalar(s) for s in r] for r in rows]
            n = len(entries)
        if "n" in fs and int(fs["n"]) != n:
            raise InputError(f"n = {fs['n']} does not match {n} given coefficients")
        names = _split_list(fs.get("names", "")) or [f"t{i}" for i in range(n)]
        if len(names) != n:
            raise InputError(f"expected {n} names")
        spec = FieldSpec(n, mode, entries, names)
        system = spec.build()
    except (NotInvertible, NonlinearSystem) as exc:
        raise InputError(str(exc)) from None
    prob = ProblemFile(spec, system)
    if cp.has_section("summand"):
        ss = cp["summand"]
        if "f" in ss:
            prob.summand = parse_expression(ss["f"], n, names)
        if "denfactors" in ss:
            prob.denfactors = parse_factors(ss["denfactors"], n, names)
    if cp.has_section("config"):
        for k, v in cp["config"].items():
            if k not in _CONFIG_TYPES:
                raise InputError(f"unknown config key '{k}'")
            prob.config[k] = _CONFIG_TYPES[k](v)
    return prob


class Output:
    """Collects result lines as text or ``key=value`` records."""

    def __init__(self, machine: bool, stream):
        self.machine = machine
        self.stream = stream

    def emit(self, key: str, value, label: str | None = None):
        if self.machine:
            print(f"{key}={value}", file=self.stream)
        else:
            print(f"{label or key}: {value}", file=self.stream)

    def text(self, line: str):
        if not self.machine:
            print(line, file=self.stream)


def _config(prob: ProblemFile, args) -> TelescopeConfig:
    kw = dict(prob.config)
    for name in ("max_t_degree", "max_x_degree", "special_slack", "max_shift_scan"):
        v = getattr(args, name, None)
        if v is not None:
            kw[name] = v
    if getattr(args, "no_discover_specials", False):
        kw["discover_specials"] = False
    if getattr(args, "factored_input", False):
        kw["factored_input"] = True
    if "x_denominator" in kw:
        kw["x_denominator"] = _parse_scalar(kw["x_denominator"]).numer
    return TelescopeConfig(**kw)


def _expr(prob: ProblemFile, text: str | None, what: str):
    if text is not None:
        return parse_expression(text, prob.field.n, prob.field.names)
    if what == "f" and prob.summand is not None:
        return prob.summand
    raise InputError(f"no {what} given")


def _class_str(c) -> str:
    if isinstance(c, Special):
        return f"special(ell={c.ell}, unit={format_xrat(c.unit)})"
    return "normal"


def _poly_str(p, names) -> str:
    return format_factored(mp.field(mp.nvars(p))(primitive_integer(p)[0]), names)


def _denominator(prob, args):
    if args.poly is not None:
        P = parse_expression(args.poly, prob.field.n, prob.field.names)
        if not mp.is_tpoly(P):
            raise InputError("--poly must be a polynomial in t")
        return P.numer, None
    f = _expr(prob, None, "f")
    factors = prob.denfactors if (args.factored_input or prob.config.get("factored_input")) else None
    return f.denom, factors


def cmd_classify(prob, args, out: Output) -> int:
    P, factors = _denominator(prob, args)
    split = split_factorization(prob.system, P, factors)
    names = prob.field.names
    unit = split.unit
    rows = []
    for f, m, c in split.factors:
        g, scale = primitive_integer(f)
        unit = unit / scale**m
        rows.append((format_poly(g, names), m, _class_str(c)))
    out.emit("unit", format_xrat(unit))
    for i, (g, m, c) in enumerate(rows):
        if out.machine:
            out.emit(f"factor{i}", f"{g};mult={m};class={c}")
        else:
            out.text(f"  {g}  ^{m}  {c}")
    n = prob.field.n
    out.emit("special_part", _poly_str(split.special_part(n), names))
    out.emit("normal_part", _poly_str(split.normal_part(n), names))
    return EXIT_OK


def cmd_disp(prob, args, out: Output) -> int:
    P, factors = _denominator(prob, args)
    d = dispersion(prob.system, P, factors, max_shift_scan=_config(prob, args).max_shift_scan)
    out.emit("dispersion", "-inf" if d == float("-inf") else d)
    return EXIT_OK


def cmd_bound(prob, args, out: Output) -> int:
    P, factors = _denominator(prob, args)
    split = split_factorization(prob.system, P, factors)
    normals = split.normal_factors()
    d = dispersion(prob.system, split.normal_part(prob.field.n), normals) if normals else float("-inf")
    dd = d - 1 if d != float("-inf") else d
    B = normal_denominator_bound(prob.system, split.normal_part(prob.field.n), dd, normals)
    out.emit("d", "-inf" if dd == float("-inf") else dd)
    out.emit("bound", _poly_str(B, prob.field.names))
    return EXIT_OK


def cmd_equiv(prob, args, out: Output) -> int:
    n, names = prob.field.n, prob.field.names
    p = parse_expression(args.p, n, names)
    q = parse_expression(args.q, n, names)
    for v in (p, q):
        if not mp.is_tpoly(v) or mp.is_tfree(v.numer):
            raise InputError("equiv needs polynomials in t")
    r = sigma_equivalent(prob.system, p.numer, q.numer, _config(prob, args).max_shift_scan)
    if isinstance(r, Equivalent):
        out.emit("i", r.i)
        out.emit("u", format_xrat(r.u))
    else:
        out.emit("result", "not equivalent")
    return EXIT_OK


def cmd_specials(prob, args, out: Output) -> int:
    sys_ = prob.system
    names = prob.field.names
    found = find_linear_specials(sys_, args.max_s)
    for i, (f, ell, u) in enumerate(found):
        body = f"{format_poly(f, names)};ell={ell};unit={format_xrat(u)}"
        if out.machine:
            out.emit(f"special{i}", body)
        else:
            out.text(f"  {format_poly(f, names)}  ell={ell}  unit={format_xrat(u)}")
    if sys_.is_constant_matrix:
        try:
            for i, (f, lam) in enumerate(cfinite_specials(sys_)):
                lam_s = str(lam.numerator) if lam.denominator == 1 else f"{lam.numerator}/{lam.denominator}"
                out.emit(f"eigenform{i}", f"{format_poly(f, names)};lambda={lam_s}")
        except IrrationalEigenvalues as exc:
            out.emit("eigenforms", f"none ({exc})")
    out.emit("count", len(found))
    return EXIT_OK


def cmd_sum(prob, args, out: Output) -> int:
    f = _expr(prob, args.expr, "f")
    cfg = _config(prob, args)
    report = SumReport()
    res = parallel_sum(prob.system, f, cfg, prob.denfactors, report)
    names = prob.field.names
    if report.dispersion is not None:
        d = report.dispersion
        out.emit("dispersion", "-inf" if d == float("-inf") else d)
    if isinstance(res, Found):
        out.emit("result", "found")
        out.emit("g", format_factored(res.g, names))
        out.emit("verified", "true")
        return EXIT_OK
    if isinstance(res, NotSummable):
        out.emit("result", "not summable (dispersion 0)")
        return EXIT_OK
    assert isinstance(res, Inconclusive)
    out.emit("result", "inconclusive")
    out.emit("exhausted", res.exhausted)
    return EXIT_INCONCLUSIVE


def cmd_verify(prob, args, out: Output) -> int:
    f = _expr(prob, args.expr, "f")
    g = _expr(prob, args.g, "g")
    out.emit("verified", "true" if verify(prob.system, g, f) else "false")
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "equiv": cmd_equiv,
    "disp": cmd_disp,
    "bound": cmd_bound,
    "specials": cmd_specials,
    "sum": cmd_sum,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parsum", description="Parallel summation in difference fields.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("problem", help="problem file")
    common.add_argument("--machine", action="store_true", help="key=value output")
    common.add_argument("--factored-input", action="store_true", help="trust denfactors as irreducible")
    common.add_argument("--max-t-degree", type=int)
    common.add_argument("--max-x-degree", type=int)
    common.add_argument("--special-slack", type=int)
    common.add_argument("--max-shift-scan", type=int)
    common.add_argument("--no-discover-specials", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("classify", "disp", "bound"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("--poly", help="polynomial instead of the summand's denominator")
    sp = sub.add_parser("equiv", parents=[common])
    sp.add_argument("p")
    sp.add_argument("q")
    sp = sub.add_parser("specials", parents=[common])
    sp.add_argument("--max-s", type=int, default=None)
    sp = sub.add_parser("sum", parents=[common])
    sp.add_argument("--expr", "-e", help="summand overriding the file")
    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("g", help="candidate antidifference")
    sp.add_argument("--expr", "-e", help="summand overriding the file")
    return ap


def run(argv: list[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out = Output(args.machine, stdout)
    try:
        prob = load_problem(args.problem)
        return COMMANDS[args.command](prob, args, out)
    except ParseError as exc:
        print(f"error: parse error: {exc}", file=stderr)
    except DegreeTooLarge as exc:
        print(f"error: {exc}", file=stderr)
    except (InputError, UnsupportedEigenvalues, IrrationalEigenvalues, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
    return EXIT_INPUT


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
