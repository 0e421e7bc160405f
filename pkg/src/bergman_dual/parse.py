"""Prefix literal grammar for expression trees and battery files.

See docs/expressions.md for the EBNF.  Examples::

    pow(shift(i, var), -1)            (w + i)^-1
    mobius(1, -i, 1, i, var)          (w - i)/(w + i)
    pow(shift(-i, var), -0.5, -1.5707963267948966, 0)
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .conformal import MobiusMap
from .fncore import (
    PRINCIPAL,
    AnalyticExpr,
    BranchSpec,
    Const,
    MobiusComp,
    Pow,
    Prod,
    ScaleArg,
    ShiftArg,
    Sum,
    Var,
)

_REAL = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_PART = rf"[+-]?(?:{_REAL}[ij]?|[ij](?![A-Za-z_]))"
_NUMBER = rf"{_PART}(?:[+-](?:{_REAL})?[ij](?![A-Za-z_]))?"
_TOKEN = re.compile(
    rf"\s*(?:(?P<pi>[+-]?pi\b)|(?P<num>{_NUMBER})|(?P<name>[A-Za-z_]\w*)|(?P<punct>[(),]))"
)


class ParseError(ValueError):
    pass


def _to_complex(text: str) -> complex:
    s = text.replace("i", "j")
    s = re.sub(r"(?<![\d.])j", "1j", s)
    return complex(s)


def _tokenize(src: str):
    pos, out = 0, []
    src = src.strip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {pos}: {src[pos:pos + 20]!r}")
        pos = m.end()
        if m.group("pi"):
            out.append(("num", -math.pi if m.group("pi").startswith("-") else math.pi))
        elif m.group("num"):
            out.append(("num", _to_complex(m.group("num"))))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("punct", m.group("punct")))
    return out


@dataclass
class _Parser:
    tokens: list
    pos: int = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def number(self) -> complex:
        kind, value = self.peek()
        if kind == "num":
            self.pos += 1
            return value
        if kind == "name" and value in ("i", "j"):
            self.pos += 1
            return 1j
        raise ParseError(f"expected a number, got {value!r}")

    def args(self, pattern: str, required: int | None = None):
        """Parse ``(`` args ``)`` where pattern letters are n (number) / e (expr) / * (exprs).

        ``required`` is the minimum argument count (default: all of ``pattern``).
        """
        required = len(pattern) if required is None else required
        self.take("punct", "(")
        out = []
        for i, kind in enumerate(pattern):
            if i:
                if kind == "?" or self.peek() == ("punct", ")"):
                    break
                self.take("punct", ",")
            if kind == "n":
                out.append(self.number())
            elif kind == "e":
                out.append(self.expr())
            elif kind == "*":
                out.append(self.expr())
                while self.peek() == ("punct", ","):
                    self.pos += 1
                    out.append(self.expr())
        self.take("punct", ")")
        if len(out) < required:
            raise ParseError(f"expected at least {required} arguments, got {len(out)}")
        return out

    def expr(self) -> AnalyticExpr:
        kind, value = self.peek()
        if kind == "num" or (kind == "name" and value in ("i", "j")):
            return Const(self.number())
        if kind != "name":
            raise ParseError(f"unexpected token {value!r}")
        self.pos += 1
        if value == "var":
            return Var()
        if value == "const":
            (c,) = self.args("n")
            return Const(c)
        if value == "sum":
            return Sum(tuple(self.args("*")))
        if value == "prod":
            return Prod(tuple(self.args("*")))
        if value == "scale":
            s, child = self.args("ne")
            return ScaleArg(s, child)
        if value == "shift":
            c, child = self.args("ne")
            return ShiftArg(c, child)
        if value == "mobius":
            a, b, c, d, child = self.args("nnnne")
            return MobiusComp(MobiusMap(a, b, c, d), child)
        if value == "pow":
            parts = self.args("ennn", required=2)
            child, nu = parts[0], parts[1]
            if len(parts) == 2:
                return Pow(child, nu)
            cut = parts[2].real
            point = parts[3] if len(parts) > 3 else 0
            try:
                return Pow(child, nu, BranchSpec(cut, point))
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
        raise ParseError(f"unknown function {value!r}")


def parse_expr(src: str) -> AnalyticExpr:
    p = _Parser(_tokenize(src))
    e = p.expr()
    if p.pos != len(p.tokens):
        raise ParseError(f"trailing input after expression: {p.tokens[p.pos:]}")
    return e


def format_number(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    im = repr(z.imag)
    if not im.startswith("-"):
        im = "+" + im
    return f"{z.real!r}{im}j"


def to_literal(e: AnalyticExpr) -> str:
    if isinstance(e, Var):
        return "var"
    if isinstance(e, Const):
        return f"const({format_number(e.value)})"
    if isinstance(e, Sum):
        return "sum(" + ", ".join(to_literal(t) for t in e.terms) + ")"
    if isinstance(e, Prod):
        return "prod(" + ", ".join(to_literal(f) for f in e.factors) + ")"
    if isinstance(e, ScaleArg):
        return f"scale({format_number(e.s)}, {to_literal(e.child)})"
    if isinstance(e, ShiftArg):
        return f"shift({format_number(e.c)}, {to_literal(e.child)})"
    if isinstance(e, MobiusComp):
        m = e.map
        coeffs = ", ".join(format_number(x) for x in (m.a, m.b, m.c, m.d))
        return f"mobius({coeffs}, {to_literal(e.child)})"
    if isinstance(e, Pow):
        base = f"pow({to_literal(e.child)}, {format_number(e.nu)}"
        if e.branch == PRINCIPAL:
            return base + ")"
        return base + f", {e.branch.cut!r}, {format_number(e.branch.point)})"
    raise TypeError(f"not an expression node: {e!r}")


@dataclass
class BatteryEntry:
    source: str
    expr: AnalyticExpr
    expect: str | None = None


def load_battery(path) -> list[BatteryEntry]:
    """Read one literal per line; ``# expect: in|out`` annotations are kept."""
    entries = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            text, _, comment = line.partition("#")
            text = text.strip()
            if not text:
                continue
            expect = None
            m = re.search(r"expect:\s*(\w+)", comment)
            if m:
                expect = m.group(1)
            try:
                entries.append(BatteryEntry(text, parse_expr(text), expect))
            except ParseError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    return entries
