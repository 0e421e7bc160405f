"""Resolvent of the scaling-group generator ``Gamma g = w g'`` on the predual.

For ``Re(lam) > 0``::

    R(lam) h(w) = int_0^inf e^{-lam t} h(e^t w) dt = w^lam int_w^inf z^{-lam-1} h(z) dz

and for ``Re(lam) < 0``::

    R(lam) h(w) = -int_0^inf e^{lam t} h(e^{-t} w) dt = -w^lam int_0^w z^{-lam-1} h(z) dz

Both satisfy ``lam R h - w (R h)' = h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conformal import HALFPLANE
from .errors import InvalidSpec, NonPositiveNorm
from .fncore import AnalyticExpr, Const, Pow, Prod, Var, derive, evaluate, literal_minus_i_power, shift_power
from .opsemi import SCALING, TRANSLATION, generator_symbolic
from .quad import QuadSpec, integrate_ray, laplace_resolvent_quad
from .spaces import MembershipVerdict, bloch_seminorm, membership, weighted_derivative_sup

#: default probes: a small cluster around 2i plus a few spread-out points
DEFAULT_PROBES = (2j, 2.3 + 2.1j, -0.2 + 1.7j, 0.1 + 2.4j, 1j, 1 + 1j, -3 + 0.5j)


@dataclass
class ResolventQuery:
    lam: complex
    h: AnalyticExpr
    probes: tuple = DEFAULT_PROBES
    q: QuadSpec = field(default_factory=QuadSpec)

    def __post_init__(self):
        self.lam = complex(self.lam)
        if self.lam.real == 0:
            raise InvalidSpec("resolvent needs Re(lam) != 0: the spectrum is the imaginary axis")
        self.probes = tuple(complex(p) for p in self.probes)
        if any(p.imag <= 0 for p in self.probes):
            raise InvalidSpec("probe points must lie in the upper half-plane")


@dataclass
class SpectralReport:
    lam: complex
    center: float
    radius: float
    circle_deviation: float
    norm_bound: float
    max_ratio: float
    ratios: tuple = ()

    @property
    def bound_ok(self) -> bool:
        return self.max_ratio <= self.norm_bound + 1e-4


def _fn(h):
    return (lambda w: evaluate(h, w)) if isinstance(h, AnalyticExpr) else h


def resolvent_at(h, lam: complex, w: complex, q: QuadSpec = QuadSpec()) -> complex:
    """``R(lam, Gamma) h (w)`` via the ray integral."""
    lam, w = complex(lam), complex(w)
    wl = complex(np.exp(lam * np.log(w)))
    if lam.real > 0:
        return wl * integrate_ray(h, w, "outward", lam, q)
    return -wl * integrate_ray(h, w, "to_origin", lam, q)


def resolvent_closed(query: ResolventQuery) -> np.ndarray:
    """Closed-form ray-integral resolvent at every probe point."""
    return np.array([resolvent_at(query.h, query.lam, p, query.q) for p in query.probes])


def scaling_orbit(h, points):
    """``t -> h(e^t w)`` for an array of points (first axis of the output is ``t``)."""
    hf = _fn(h)
    pts = np.asarray(points, dtype=complex)

    def orbit(t):
        return hf(np.exp(np.asarray(t))[(...,) + (None,) * pts.ndim] * pts)

    def inverse(t):
        return hf(np.exp(-np.asarray(t))[(...,) + (None,) * pts.ndim] * pts)

    return orbit, inverse


def translation_orbit(h, points):
    """``t -> h(w - t)`` and the inverse orbit ``t -> h(w + t)``."""
    hf = _fn(h)
    pts = np.asarray(points, dtype=complex)

    def orbit(t):
        return hf(pts - np.asarray(t)[(...,) + (None,) * pts.ndim])

    def inverse(t):
        return hf(pts + np.asarray(t)[(...,) + (None,) * pts.ndim])

    return orbit, inverse


def resolvent_laplace(h, lam: complex, points, q: QuadSpec = QuadSpec(), kind: str = SCALING):
    """Laplace-transform resolvent ``int_0^inf e^{-lam t} S_t h dt`` at ``points``."""
    orbit_fn = scaling_orbit if kind == SCALING else translation_orbit
    if kind not in (SCALING, TRANSLATION):
        raise InvalidSpec(f"unknown group kind {kind!r}")
    orbit, inverse = orbit_fn(h, points)
    return laplace_resolvent_quad(orbit, lam, q, inverse_orbit=inverse)


def resolvent_derivative_laplace(h, lam: complex, points, q: QuadSpec = QuadSpec()):
    """``(R h)'`` from the orbit of the derivative, ``d/dw h(e^t w) = e^t h'(e^t w)``."""
    dh = _fn(derive(h)) if isinstance(h, AnalyticExpr) else h
    pts = np.asarray(points, dtype=complex)

    def orbit(t):
        e = np.exp(np.asarray(t))[(...,) + (None,) * pts.ndim]
        return e * dh(e * pts)

    def inverse(t):
        e = np.exp(-np.asarray(t))[(...,) + (None,) * pts.ndim]
        return e * dh(e * pts)

    return laplace_resolvent_quad(orbit, lam, q, inverse_orbit=inverse)


def stencil_derivative(F, w: complex, step: float | None = None) -> complex:
    """Average of central differences along the real and imaginary directions."""
    h = 1e-4 * (1 + abs(w)) if step is None else step
    dx = (F(w + h) - F(w - h)) / (2 * h)
    dy = (F(w + 1j * h) - F(w - 1j * h)) / (2j * h)
    return 0.5 * (dx + dy)


def resolvent_identity_residual(query: ResolventQuery) -> float:
    """``max_k |lam Rh(w_k) - w_k (Rh)'(w_k) - h(w_k)|`` with a stencil derivative."""
    hf = _fn(query.h)
    R = lambda w: resolvent_at(query.h, query.lam, w, query.q)
    worst = 0.0
    for w in query.probes:
        res = query.lam * R(w) - w * stencil_derivative(R, w) - hf(w)
        worst = max(worst, abs(res))
    return worst


def spectral_circle_check(lam: complex, r_samples) -> float:
    """Max of ``| |1/(lam - i r) - 1/(2 Re lam)| - 1/(2|Re lam|) |`` over the samples."""
    lam = complex(lam)
    if lam.real == 0:
        raise InvalidSpec("circle check needs Re(lam) != 0")
    r = np.asarray(r_samples, dtype=float)
    w = 1.0 / (lam - 1j * r)
    c = 1.0 / (2 * lam.real)
    return float(np.max(np.abs(np.abs(w - c) - abs(c)), initial=0.0))


def resolvent_seminorm(h: AnalyticExpr, lam: complex, q: QuadSpec = QuadSpec(), chunk: int = 2048):
    """``||R(lam) h||_{B_inf,1}`` with ``(R h)'`` from the derivative orbit."""

    def dR(points):
        pts = np.asarray(points, dtype=complex)
        if pts.ndim == 0:
            return complex(resolvent_derivative_laplace(h, lam, pts.reshape(1), q)[0])
        flat = pts.ravel()
        out = np.empty(flat.shape, dtype=complex)
        for i in range(0, flat.size, chunk):
            out[i:i + chunk] = resolvent_derivative_laplace(h, lam, flat[i:i + chunk], q)
        return out.reshape(pts.shape)

    return weighted_derivative_sup(dR, HALFPLANE, q)


def resolvent_norm_probe(lam: complex, battery, q: QuadSpec = QuadSpec(), r_samples=None) -> SpectralReport:
    """Ratios ``||R h||/||h||`` in the Bloch seminorm; bound ``1/|Re lam|``."""
    lam = complex(lam)
    if lam.real == 0:
        raise InvalidSpec("norm probe needs Re(lam) != 0")
    ratios = []
    for h in battery:
        hn = bloch_seminorm(h, HALFPLANE, q).value
        if not hn > 0:
            raise NonPositiveNorm("resolvent ratio needs a nonzero seminorm")
        ratios.append(resolvent_seminorm(h, lam, q).value / hn)
    if r_samples is None:
        r_samples = np.linspace(-50, 50, 1001)
    c = 1.0 / (2 * lam.real)
    return SpectralReport(lam, c, abs(c), spectral_circle_check(lam, r_samples), 1.0 / abs(lam.real),
                          max(ratios, default=0.0), tuple(ratios))


def eigen_candidate(lam: complex, c: complex) -> AnalyticExpr:
    """``c w^lam`` on the principal branch."""
    return Prod((Const(c), Pow(Var(), lam)))


def eigen_candidate_check(lam: complex, c: complex, q: QuadSpec = QuadSpec(),
                          probes=DEFAULT_PROBES) -> tuple[float, MembershipVerdict]:
    """Return the eigen-equation residual of ``c w^lam`` and its membership verdict.

    The residual ``max |Gamma g - lam g|`` over the probes must vanish; the verdict
    must be "not in space".
    """
    if c == 0:
        raise InvalidSpec("eigen candidate needs c != 0")
    g = eigen_candidate(lam, c)
    gen = generator_symbolic(SCALING, g)
    pts = np.asarray(probes, dtype=complex)
    resid = float(np.max(np.abs(evaluate(gen, pts) - complex(lam) * evaluate(g, pts))))
    return resid, membership(g, q)


@dataclass
class BoundaryProbe:
    """Candidate ``f = (w - i)^-lam`` for ``(lam - Gamma) f = (w - i)^-(lam+1)``.

    It is not a solution: ``(lam - Gamma) f = lam (2w - i)(w - i)^-(lam+1)``.

    ``literal_residual`` is measured on the slit domain; ``surrogate_residual``
    is the resolvent identity residual for ``h = (w + i)^-(lam+1)`` (only when
    ``Re lam != 0``).
    """

    lam: complex
    literal_residual: float
    literal_relative: float
    surrogate_residual: float | None


def boundary_probe(lam: complex, q: QuadSpec = QuadSpec(), probes=(1 + 1j, 2 + 0.5j, 0.5 + 3j)) -> BoundaryProbe:
    lam = complex(lam)
    f = literal_minus_i_power(-lam)
    h = literal_minus_i_power(-lam - 1)
    lhs = Prod((Const(lam), f)) - generator_symbolic(SCALING, f)
    pts = np.asarray(probes, dtype=complex)
    diff = np.abs(evaluate(lhs, pts) - evaluate(h, pts))
    rel = float(np.max(diff / np.abs(evaluate(h, pts))))
    surrogate = None
    if lam.real != 0:
        hs = shift_power(1j, -lam - 1)
        surrogate = resolvent_identity_residual(ResolventQuery(lam, hs, tuple(probes), q))
    return BoundaryProbe(lam, float(np.max(diff)), rel, surrogate)


def reflect(h):
    """``h*(w) = conj(h(-conj(w)))``; the reflection ``w -> -conj(w)`` preserves the half-plane."""
    hf = _fn(h)
    return lambda w: np.conj(hf(-np.conj(w)))
