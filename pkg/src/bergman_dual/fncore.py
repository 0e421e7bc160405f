"""Expression trees for the analytic test functions.

Trees are built from constants, the variable, sums, products, Möbius
composites, branch-aware complex powers and argument scalings/shifts.  They
evaluate on scalars or numpy arrays and differentiate exactly: ``derive``
returns another tree.  No simplification is attempted; two trees are
compared by evaluating them, never structurally.

>>> f = Pow(ShiftArg(1j, Var()), -1)
>>> evaluate(f, 1j)
-0.5j
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number

import numpy as np

from .conformal import MobiusMap
from .errors import BranchCutHit, PoleHit

_TWO_PI = 2 * math.pi
# angular slack for "on the cut": a few ulps of pi
_CUT_SLACK = 4e-15


@dataclass(frozen=True)
class BranchSpec:
    """Branch of ``log(u - point)`` with its cut along the ray ``arg = cut``.

    ``point`` lives in the plane of the power's base, so the principal branch
    is ``BranchSpec(math.pi, 0)``.
    """

    cut: float = math.pi
    point: complex = 0j

    def __post_init__(self):
        if not (-math.pi < self.cut <= math.pi):
            raise ValueError(f"cut direction {self.cut} outside (-pi, pi]")
        object.__setattr__(self, "point", complex(self.point))

    @property
    def is_principal(self) -> bool:
        return self.cut == math.pi and self.point == 0

    def arg(self, u):
        """Continuous argument of ``u - point`` off the cut.

        The range is ``(cut - 2pi, cut]`` for ``cut >= 0`` and ``[cut, cut + 2pi)``
        otherwise, so it always contains 0; points on the cut are rejected by callers.
        """
        a = np.angle(u - self.point)
        if self.is_principal:
            return a
        if self.cut >= 0:
            return self.cut - np.mod(self.cut - a, _TWO_PI)
        return self.cut + np.mod(a - self.cut, _TWO_PI)

    def on_cut(self, u):
        v = np.asarray(u - self.point)
        d = np.mod(np.angle(v) - self.cut + math.pi, _TWO_PI) - math.pi
        return (v == 0) | (np.abs(d) <= _CUT_SLACK)


PRINCIPAL = BranchSpec()


def _is_integer(nu: complex) -> bool:
    return nu.imag == 0 and float(nu.real).is_integer()


def _int_power(u, n: int):
    """``u**n`` by binary exponentiation (negative ``n`` via reciprocal)."""
    m = abs(n)
    result = np.ones_like(u) if isinstance(u, np.ndarray) else 1 + 0j
    base = u
    while m:
        if m & 1:
            result = result * base
        m >>= 1
        if m:
            base = base * base
    return 1 / result if n < 0 else result


def pow_branch(base, nu, branch: BranchSpec = PRINCIPAL):
    """``exp(nu (ln|base - b| + i arg_cut(base - b)))`` with ``b = branch.point``.

    Integer exponents are single valued and bypass the branch entirely.
    """
    nu = complex(nu)
    scalar = np.ndim(base) == 0
    u = np.asarray(base, dtype=complex)
    shifted = u - branch.point
    if _is_integer(nu):
        n = int(nu.real)
        if n < 0 and np.any(shifted == 0):
            raise PoleHit(f"pow(., {n})", base)
        out = _int_power(shifted, n)
    else:
        if np.any(branch.on_cut(u)):
            raise BranchCutHit(f"pow(., {nu}, cut={branch.cut})", base)
        logu = np.log(np.abs(shifted)) + 1j * branch.arg(u)
        out = np.exp(nu * logu)
    return complex(out) if scalar else out


class AnalyticExpr:
    """Base node.  Nodes are immutable; arithmetic builds new trees."""

    def __call__(self, w):
        return evaluate(self, w)

    def derive(self) -> "AnalyticExpr":
        return derive(self)

    def __add__(self, other):
        return Sum((self, as_expr(other)))

    def __radd__(self, other):
        return Sum((as_expr(other), self))

    def __sub__(self, other):
        return Sum((self, Prod((Const(-1), as_expr(other)))))

    def __rsub__(self, other):
        return Sum((as_expr(other), Prod((Const(-1), self))))

    def __mul__(self, other):
        return Prod((self, as_expr(other)))

    def __rmul__(self, other):
        return Prod((as_expr(other), self))

    def __neg__(self):
        return Prod((Const(-1), self))

    def __truediv__(self, other):
        if isinstance(other, Number):
            return Prod((self, Const(1 / complex(other))))
        return Prod((self, Pow(as_expr(other), -1)))

    def __pow__(self, nu):
        return Pow(self, nu)

    def __str__(self):
        from .parse import to_literal

        return to_literal(self)


@dataclass(frozen=True, eq=False, repr=True)
class Const(AnalyticExpr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True, eq=False, repr=True)
class Var(AnalyticExpr):
    pass


@dataclass(frozen=True, eq=False, repr=True)
class Sum(AnalyticExpr):
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))


@dataclass(frozen=True, eq=False, repr=True)
class Prod(AnalyticExpr):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))


@dataclass(frozen=True, eq=False, repr=True)
class MobiusComp(AnalyticExpr):
    """``child(m(w))``."""

    map: MobiusMap
    child: AnalyticExpr


@dataclass(frozen=True, eq=False, repr=True)
class Pow(AnalyticExpr):
    child: AnalyticExpr
    nu: complex
    branch: BranchSpec = PRINCIPAL

    def __post_init__(self):
        object.__setattr__(self, "nu", complex(self.nu))


@dataclass(frozen=True, eq=False, repr=True)
class ScaleArg(AnalyticExpr):
    """``child(s w)``."""

    s: complex
    child: AnalyticExpr

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))


@dataclass(frozen=True, eq=False, repr=True)
class ShiftArg(AnalyticExpr):
    """``child(w + c)``."""

    c: complex
    child: AnalyticExpr

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))


def as_expr(x) -> AnalyticExpr:
    if isinstance(x, AnalyticExpr):
        return x
    if isinstance(x, Number):
        return Const(x)
    raise TypeError(f"cannot convert {type(x).__name__} to AnalyticExpr")


def evaluate(expr: AnalyticExpr, w):
    """Evaluate ``expr`` at a scalar or an array of points.

    Raises BranchCutHit / PoleHit instead of returning a silent value.
    """
    scalar = np.ndim(w) == 0
    arr = np.asarray(w, dtype=complex)
    out = _eval(expr, arr)
    if scalar:
        return complex(out)
    if np.shape(out) != arr.shape:
        out = np.broadcast_to(out, arr.shape).copy()
    return out


def _eval(e, w):
    if isinstance(e, Const):
        return np.full(w.shape, e.value, dtype=complex) if w.ndim else e.value
    if isinstance(e, Var):
        return w
    if isinstance(e, Sum):
        total = np.zeros(w.shape, dtype=complex) if w.ndim else 0j
        for term in e.terms:
            total = total + _eval(term, w)
        return total
    if isinstance(e, Prod):
        total = np.ones(w.shape, dtype=complex) if w.ndim else 1 + 0j
        for factor in e.factors:
            total = total * _eval(factor, w)
        return total
    if isinstance(e, MobiusComp):
        den = e.map.denominator(w)
        if np.any(den == 0):
            raise PoleHit(e, w)
        return _eval(e.child, (e.map.a * w + e.map.b) / den)
    if isinstance(e, Pow):
        base = _eval(e.child, w)
        try:
            return pow_branch(base, e.nu, e.branch)
        except BranchCutHit as exc:
            raise BranchCutHit(e, w) from exc
        except PoleHit as exc:
            raise PoleHit(e, w) from exc
    if isinstance(e, ScaleArg):
        return _eval(e.child, e.s * w)
    if isinstance(e, ShiftArg):
        return _eval(e.child, w + e.c)
    raise TypeError(f"not an expression node: {e!r}")


def mobius_derivative_expr(m: MobiusMap) -> AnalyticExpr:
    """``m'(w) = det/(cw + d)^2`` as a tree."""
    if m.c == 0:
        return Const(m.det / m.d ** 2)
    return Prod((Const(m.det / m.c ** 2), Pow(ShiftArg(m.d / m.c, Var()), -2)))


def derive(e: AnalyticExpr) -> AnalyticExpr:
    """Exact derivative; Pow nodes keep their BranchSpec."""
    if isinstance(e, Const):
        return Const(0)
    if isinstance(e, Var):
        return Const(1)
    if isinstance(e, Sum):
        return Sum(tuple(derive(t) for t in e.terms))
    if isinstance(e, Prod):
        fs = e.factors
        terms = []
        for i, f in enumerate(fs):
            terms.append(Prod(fs[:i] + (derive(f),) + fs[i + 1:]))
        return Sum(tuple(terms))
    if isinstance(e, MobiusComp):
        return Prod((MobiusComp(e.map, derive(e.child)), mobius_derivative_expr(e.map)))
    if isinstance(e, Pow):
        if e.nu == 0:
            return Const(0)
        return Prod((Const(e.nu), Pow(e.child, e.nu - 1, e.branch), derive(e.child)))
    if isinstance(e, ScaleArg):
        return Prod((Const(e.s), ScaleArg(e.s, derive(e.child))))
    if isinstance(e, ShiftArg):
        return ShiftArg(e.c, derive(e.child))
    raise TypeError(f"not an expression node: {e!r}")


def node_count(e: AnalyticExpr) -> int:
    if isinstance(e, (Const, Var)):
        return 1
    if isinstance(e, Sum):
        return 1 + sum(node_count(t) for t in e.terms)
    if isinstance(e, Prod):
        return 1 + sum(node_count(f) for f in e.factors)
    return 1 + node_count(e.child)


# -- common constructors ----------------------------------------------------

def var() -> Var:
    return Var()


def shift_power(c: complex, nu: complex, branch: BranchSpec = PRINCIPAL) -> Pow:
    """``(w + c)^nu``."""
    return Pow(ShiftArg(c, Var()), nu, branch)


def compose_mobius(m: MobiusMap, f: AnalyticExpr | None = None) -> MobiusComp:
    """``f(m(w))``; with ``f`` omitted this is just ``m`` as a tree."""
    return MobiusComp(m, Var() if f is None else f)


def vanishing_at(f: AnalyticExpr, point: complex = 1j) -> AnalyticExpr:
    """``f - f(point)``."""
    return Sum((f, Const(-evaluate(f, point))))


#: cut for ``(w - i)^nu`` written as a power of ``u = w - i``: the ray
#: ``arg u = -pi/2``, i.e. the vertical ray below ``w = i``.
DOWNWARD_CUT = BranchSpec(-math.pi / 2, 0)


def literal_minus_i_power(nu: complex) -> Pow:
    """``(w - i)^nu`` with the downward cut; evaluable on the half-plane minus ``(0, i]``."""
    return Pow(ShiftArg(-1j, Var()), nu, DOWNWARD_CUT)
