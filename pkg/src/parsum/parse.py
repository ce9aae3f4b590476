"""Expression parser and printer for elements of Q(x)(t0..t{n-1}).

Grammar (whitespace-insensitive, standard precedence, ``^`` binds tightest and
takes a nonnegative integer literal)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"
"""

from __future__ import annotations

import re
from math import gcd, lcm
from dataclasses import dataclass

from . import multipoly as mp
from .scalar import QQ, XRat

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(Token("int", m.group(1), start))
        elif m.group(2):
            out.append(Token("name", m.group(2), start))
        else:
            out.append(Token("op", m.group(3), start))
        pos = m.end()
    out.append(Token("end", "", len(text.rstrip())))
    return out


def _linecol(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, n: int, names: list[str] | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.n = n
        self.F = mp.field(n)
        names = names or [f"t{i}" for i in range(n)]
        if len(names) != n:
            raise ValueError(f"expected {n} variable names, got {len(names)}")
        gens = self.F.gens
        self.vars = {name: gens[i] for i, name in enumerate(names)}
        self.vars["x"] = gens[n]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.toks[self.i]
        line, col = _linecol(self.text, tok.pos)
        raise ParseError(msg, line, col)

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        tok = self.take()
        if tok.text != text or tok.kind != "op":
            self.error(f"expected '{text}'", tok)

    def parse(self):
        if self.peek().kind == "end":
            self.error("empty expression")
        v = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected '{self.peek().text}'")
        return v

    def expr(self):
        v = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            tok = self.take()
            w = self.unary()
            if tok.text == "*":
                v = v * w
            else:
                if not w:
                    self.error("division by zero polynomial", tok)
                v = v / w
        return v

    def unary(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.take()
            v = self.unary()
            return -v if tok.text == "-" else v
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            tok = self.take()
            if tok.kind != "int":
                self.error("exponent must be a nonnegative integer literal", tok)
            if not v and tok.text.strip("0") == "":
                self.error("0^0 is undefined", tok)
            v = v ** int(tok.text)
        return v

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return self.F(int(tok.text))
        if tok.kind == "name":
            if tok.text not in self.vars:
                self.error(f"unknown variable '{tok.text}'", tok)
            return self.vars[tok.text]
        if tok.kind == "op" and tok.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        if tok.kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected '{tok.text}'", tok)

    def factor_list(self):
        """Top-level product ``f1^k1 * f2^k2 * ...`` kept unexpanded."""
        out = []
        while True:
            base = self.atom()
            e = 1
            if self.peek().kind == "op" and self.peek().text == "^":
                self.take()
                tok = self.take()
                if tok.kind != "int":
                    self.error("exponent must be a nonnegative integer literal", tok)
                e = int(tok.text)
            out.append((base, e))
            if self.peek().kind == "op" and self.peek().text == "*":
                self.take()
                continue
            if self.peek().kind != "end":
                self.error(f"unexpected '{self.peek().text}' in factor list")
            return out


def parse_expression(text: str, n: int, names: list[str] | None = None):
    """Parse ``text`` into an element of ``field(n)``."""
    return _Parser(text, n, names).parse()


def parse_factors(text: str, n: int, names: list[str] | None = None) -> list[tuple[object, int]]:
    """Parse ``(p1)^k1 * (p2)^k2 * ...`` into ``[(p1, k1), ...]`` (ring elements)."""
    p = _Parser(text, n, names)
    if p.peek().kind == "end":
        p.error("empty factor list")
    out = []
    for f, e in p.factor_list():
        if not mp.is_tpoly(f) or not mp.is_tfree(f.denom):
            raise ParseError("factors must be polynomials", 1, 1)
        out.append((f.numer.quo_ground(f.denom.LC) if f.denom.is_ground else f.numer, e))
    return out


def _fmt_rat(c) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(p, names: list[str] | None = None) -> str:
    """Expanded form with terms in lex order; parseable by parse_expression."""
    syms = [str(s) for s in p.ring.symbols]
    if names is not None:
        names = list(names) + syms[len(names):]
    else:
        names = syms
    if not p:
        return "0"
    parts = []
    for m, c in p.terms():
        vs = []
        for name, e in zip(names, m):
            if e == 1:
                vs.append(name)
            elif e:
                vs.append(f"{name}^{e}")
        mag = abs(c)
        if vs:
            body = "*".join(vs) if mag == 1 else f"{_fmt_rat(mag)}*" + "*".join(vs)
        else:
            body = _fmt_rat(mag)
        parts.append(("-" if c < 0 else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def format_rat(f, names: list[str] | None = None) -> str:
    num, den = mp.parts(f)
    if den == 1:
        return format_poly(num, names)
    return f"({format_poly(num, names)})/({format_poly(den, names)})"


def format_xrat(r: XRat) -> str:
    num, den = r.numer, r.denom
    lc = den.LC
    num, den = num.quo_ground(lc), den.quo_ground(lc)
    if den == 1:
        return format_poly(num)
    return f"({format_poly(num)})/({format_poly(den)})"


def primitive_integer(p):
    """Associate of ``p`` with coprime integer coefficients and positive
    leading coefficient (display normal form)."""
    cs = p.coeffs()
    L = 1
    for c in cs:
        L = lcm(L, int(c.denominator))
    G = 0
    for c in cs:
        G = gcd(G, int(c.numerator * (L // int(c.denominator))))
    scale = QQ(L, G)
    if p.LC < 0:
        scale = -scale
    return p * scale, scale


def format_factored(f, names: list[str] | None = None) -> str:
    """Field element with numerator and denominator factored over Q."""
    if not f:
        return "0"

    def factored(P):
        content, fs = P.factor_list()
        pieces = []
        for g, m in sorted(fs, key=lambda gm: mp.sort_key(gm[0])):
            g2, scale = primitive_integer(g)
            content /= scale**m
            body = format_poly(g2, names)
            if len(g2.terms()) > 1:
                body = f"({body})"
            pieces.append(body if m == 1 else f"{body}^{m}")
        return content, pieces

    cn, pn = factored(f.numer)
    cd, pd = factored(f.denom)
    c = cn / cd
    num_s = "*".join(pn)
    sign = "-" if c < 0 else ""
    c = abs(c)
    if c.numerator != 1 or not pn:
        num_s = str(c.numerator) + ("*" + num_s if num_s else "")
    den_parts = ([str(c.denominator)] if c.denominator != 1 else []) + pd
    if not den_parts:
        return sign + num_s
    den_s = "*".join(den_parts)
    if len(den_parts) > 1:
        den_s = f"({den_s})"
    if len(pn) > 1 or (pn and c.numerator != 1):
        num_s = f"({num_s})"
    return f"{sign}{num_s}/{den_s}"
