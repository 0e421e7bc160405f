"""Composition groups, weighted composition, the embedding operators and generator probes.

Two automorphism families of the upper half-plane are used:

* scaling, ``phi_t(z) = e^{-t} z``, acting by ``T_t f(z) = e^{-t gamma} f(e^{-t} z)``
  on the L^1 Bergman space and ``S_t g(w) = g(e^t w)`` on the predual;
* translation, ``phi_t(z) = z + t``, acting by ``T_t f(z) = f(z + t)`` and
  ``S_t g(w) = g(w - t)``.

Group actions are symbolic: they return new expression trees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .conformal import CAYLEY, CAYLEY_INV, HALFPLANE, MobiusMap, scaling_disk_map, translation_disk_map
from .errors import InvalidSpec
from .fncore import (
    AnalyticExpr,
    Const,
    MobiusComp,
    Pow,
    Prod,
    ScaleArg,
    ShiftArg,
    Sum,
    Var,
    derive,
    evaluate,
)
from .quad import QuadSpec, polar_rule
from .spaces import bloch_seminorm

SCALING = "scaling"
TRANSLATION = "translation"
L1_BERGMAN = "L1_bergman"
PREDUAL_BLOCH = "predual_bloch"
KINDS = (SCALING, TRANSLATION)
DEFAULT_LADDER = (1e-1, 1e-2, 1e-3, 1e-4)


@dataclass(frozen=True)
class GroupDescriptor:
    kind: str
    space: str
    t: float
    gamma: float = 2.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown group kind {self.kind!r}")
        if self.space not in (L1_BERGMAN, PREDUAL_BLOCH):
            raise InvalidSpec(f"unknown space {self.space!r}")

    def compose(self, other: "GroupDescriptor") -> "GroupDescriptor":
        """Descriptor of ``self o other``; parameters add."""
        if (self.kind, self.space, self.gamma) != (other.kind, other.space, other.gamma):
            raise InvalidSpec("can only compose descriptors of the same group")
        return GroupDescriptor(self.kind, self.space, self.t + other.t, self.gamma)

    def at(self, t: float) -> "GroupDescriptor":
        return GroupDescriptor(self.kind, self.space, t, self.gamma)


def apply_group(d: GroupDescriptor, f: AnalyticExpr) -> AnalyticExpr:
    """Apply the group element described by ``d`` to ``f`` symbolically."""
    if d.t == 0:
        return f
    if d.kind == SCALING:
        if d.space == PREDUAL_BLOCH:
            return ScaleArg(math.exp(d.t), f)
        return Prod((Const(math.exp(-d.t * d.gamma)), ScaleArg(math.exp(-d.t), f)))
    if d.space == PREDUAL_BLOCH:
        return ShiftArg(-d.t, f)
    return ShiftArg(d.t, f)


def predual_group(kind: str, t: float) -> GroupDescriptor:
    return GroupDescriptor(kind, PREDUAL_BLOCH, t)


def l1_group(kind: str, t: float, alpha: float) -> GroupDescriptor:
    return GroupDescriptor(kind, L1_BERGMAN, t, alpha + 2)


def weighted_derivative_power(g: MobiusMap, gamma: float) -> AnalyticExpr:
    """``(g')^gamma`` as ``(c z + d)^(-2 gamma)`` using the normalization ``ad - bc = 1``.

    The principal power of the linear denominator is analytic wherever
    ``c z + d`` avoids the negative real axis, which holds for the Cayley maps
    on their domains.
    """
    if g.c == 0:
        return Const(complex(g.d) ** (-2 * gamma))
    lin = Prod((Const(g.c), ShiftArg(g.d / g.c, Var())))
    return Pow(lin, -2 * gamma)


def weighted_composition(g: MobiusMap, gamma: float, f: AnalyticExpr) -> AnalyticExpr:
    """``S_g f(z) = (g'(z))^gamma f(g(z))``."""
    comp = MobiusComp(g, f)
    if gamma == 0:
        return comp
    return Prod((weighted_derivative_power(g, gamma), comp))


def cayley_weighted(f: AnalyticExpr, alpha: float) -> AnalyticExpr:
    """``S_psi f`` with ``gamma = alpha + 2``, a function on the disk."""
    return weighted_composition(CAYLEY, alpha + 2, f)


# -- embedding operators ---------------------------------------------------

@dataclass
class EmbeddingOperator:
    """``T f(z) = (1-|z|^2)^t int_D f(w) (1 - z conj(w))^-(2+t+alpha) dm_alpha(w)``.

    Evaluation is a single product-rule quadrature per point; the nodes of the
    rule are fixed at construction so nested applications reuse them.
    """

    t: float
    alpha: float
    n_r: int = 48
    n_t: int = 96
    chunk: int = 512
    _nodes: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if not self.t > 0 or not self.alpha > -1:
            raise InvalidSpec("embedding needs t > 0 and alpha > -1")
        self._nodes = polar_rule(self.n_r, self.n_t, self.alpha)

    @property
    def s(self) -> float:
        return 2 + self.t + self.alpha

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes[0]

    def analytic_part(self, values: np.ndarray, z) -> np.ndarray:
        """``int f(w)(1 - z conj(w))^-s dm_alpha(w)`` given ``values = f(nodes)``."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        w, wt = self._nodes
        fw = np.asarray(values, dtype=complex) * wt
        cw = np.conj(w)
        out = np.empty(z.shape, dtype=complex)
        flat, res = z.ravel(), out.ravel()
        for i in range(0, flat.size, self.chunk):
            zz = flat[i:i + self.chunk]
            kern = np.exp(-self.s * np.log(1 - zz[:, None] * cw[None, :]))
            res[i:i + self.chunk] = kern @ fw
        return out

    def series_part(self, values: np.ndarray, z) -> np.ndarray:
        """The same integral through the kernel expansion ``sum_k c_k (z conj(w))^k``.

        ``c_k = Gamma(k+s)/(Gamma(s) k!)``.  The moments ``int f conj(w)^k dm_alpha``
        are computed by the rule for ``k < n_t/2``, which the trapezoid in angle
        resolves.  Unlike the direct kernel sum this stays accurate for ``|z|``
        arbitrarily close to 1, e.g. at the rule's own outermost nodes.
        """
        w, wt = self._nodes
        K = self.n_t // 2
        k = np.arange(K)
        moments = (np.conj(w)[None, :] ** k[:, None]) @ (np.asarray(values, dtype=complex) * wt)
        coef = np.exp(gammaln(k + self.s) - gammaln(self.s) - gammaln(k + 1)) * moments
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, coef)

    def apply_values(self, values: np.ndarray, z, series: bool = False):
        z = np.asarray(z, dtype=complex)
        part = self.series_part(values, z) if series else self.analytic_part(values, z).reshape(z.shape)
        return (1 - np.abs(z) ** 2) ** self.t * part

    def __call__(self, f, z):
        fn = f if callable(f) and not isinstance(f, AnalyticExpr) else (lambda w: evaluate(f, w))
        return self.apply_values(fn(self.nodes), z)

    def squared(self, f, z):
        """``T(T f)``; the inner ``T f`` is needed at the rule's nodes, where the series form is used."""
        fn = f if callable(f) and not isinstance(f, AnalyticExpr) else (lambda w: evaluate(f, w))
        inner = self.apply_values(fn(self.nodes), self.nodes, series=True)
        return self.apply_values(inner, z)


def embedding_T(f, t: float, alpha: float, q: QuadSpec = QuadSpec()):
    """Return ``T f`` as a numerically evaluable function on the disk."""
    op = EmbeddingOperator(t, alpha, min(q.radial_nodes, 64), min(q.angular_nodes, 128))
    vals = (f if callable(f) and not isinstance(f, AnalyticExpr) else (lambda w: evaluate(f, w)))(op.nodes)
    return lambda z: op.apply_values(vals, z)


def embedding_S(f, t: float, alpha: float, q: QuadSpec = QuadSpec(), squared: bool = False):
    """``S = C_{psi^-1} T C_psi`` (or ``S^2``) applied to a half-plane function ``f``."""
    op = EmbeddingOperator(t, alpha, min(q.radial_nodes, 64), min(q.angular_nodes, 128))
    fn = (f if callable(f) and not isinstance(f, AnalyticExpr) else (lambda w: evaluate(f, w)))
    pulled = fn(CAYLEY(op.nodes))
    if squared:
        pulled = op.apply_values(pulled, op.nodes, series=True)
    return lambda w: op.apply_values(pulled, CAYLEY_INV(np.asarray(w, dtype=complex)))


@dataclass
class EmbeddingFit:
    c_star: complex
    claimed: float
    spread: float
    ratios: np.ndarray


def fit_embedding_scalar(f, t: float, alpha: float, probes, q: QuadSpec = QuadSpec()) -> EmbeddingFit:
    """Least-squares ``c*`` with ``S f ~ c* S^2 f`` over the probe points.

    ``spread`` is ``max_k |r_k - c*|/|c*|`` with ``r_k`` the pointwise ratios.
    """
    probes = np.asarray(probes, dtype=complex)
    sf = embedding_S(f, t, alpha, q)(probes)
    s2f = embedding_S(f, t, alpha, q, squared=True)(probes)
    c_star = np.vdot(s2f, sf) / np.vdot(s2f, s2f)
    ratios = sf / s2f
    spread = float(np.max(np.abs(ratios - c_star)) / abs(c_star))
    return EmbeddingFit(complex(c_star), alpha + t + 1, spread, ratios)


# -- generators ------------------------------------------------------------

def generator_symbolic(kind: str, g: AnalyticExpr) -> AnalyticExpr:
    """``w g'(w)`` for scaling, ``-g'(w)`` for translation."""
    if kind == SCALING:
        return Prod((Var(), derive(g)))
    if kind == TRANSLATION:
        return Prod((Const(-1), derive(g)))
    raise InvalidSpec(f"unknown group kind {kind!r}")


def difference_quotient(d: GroupDescriptor, g: AnalyticExpr) -> AnalyticExpr:
    """``(S_t g - g)/t`` as a tree."""
    return Prod((Const(1 / d.t), Sum((apply_group(d, g), Prod((Const(-1), g))))))


@dataclass
class GeneratorProbe:
    ladder: tuple
    residuals: tuple
    order: float

    def __post_init__(self):
        if any(b >= a for a, b in zip(self.ladder, self.ladder[1:])):
            raise ValueError("t-ladder must be strictly decreasing")


def fitted_order(ladder, values) -> float:
    """Least-squares slope of ``log r`` against ``log t``; nan if any residual is 0."""
    v = np.asarray(values, dtype=float)
    if np.any(v <= 0):
        return math.nan
    return float(np.polyfit(np.log(ladder), np.log(v), 1)[0])


def generator_fd(d: GroupDescriptor, g: AnalyticExpr, ladder=DEFAULT_LADDER,
                 q: QuadSpec = QuadSpec()) -> GeneratorProbe:
    """Residuals ``||(S_t g - g)/t - Gamma g||_{B_inf,1}`` along the ladder."""
    gen = generator_symbolic(d.kind, g)
    res = []
    for t in ladder:
        diff = Sum((difference_quotient(d.at(t), g), Prod((Const(-1), gen))))
        res.append(bloch_seminorm(diff, HALFPLANE, q).value)
    return GeneratorProbe(tuple(ladder), tuple(res), fitted_order(ladder, res))


def continuity_probe(d: GroupDescriptor, g: AnalyticExpr, ladder=(1.0, 0.1, 0.01, 0.001),
                     q: QuadSpec = QuadSpec()) -> tuple:
    """Decay table ``t -> ||S_t g - g||_{B_inf,1}``."""
    out = []
    for t in ladder:
        diff = Sum((apply_group(d.at(t), g), Prod((Const(-1), g))))
        out.append(bloch_seminorm(diff, HALFPLANE, q).value)
    return tuple(out)


def disk_conjugate_pullback(kind: str, t: float, g: AnalyticExpr) -> AnalyticExpr:
    """``(g o psi) o h_a`` with ``h_a = psi^-1 o phi_{-t} o psi``, as a disk function."""
    h = scaling_disk_map(t) if kind == SCALING else translation_disk_map(t)
    return MobiusComp(h, MobiusComp(CAYLEY, g))

