"""Weighted area integrals on the disk and half-plane, ray integrals and Laplace quadrature.

Area measure is ``dA = dx dy / pi`` on both domains, ``dm_alpha = (1-|z|^2)^alpha dA``
on the disk and ``dmu_alpha = (Im w)^alpha dA`` on the half-plane.  Note that
``dm_alpha`` has total mass ``1/(alpha+1)``, not 1.

Two product rules on the disk are available:

``polar``
    centred at the origin: Gauss-Jacobi in ``u = r^2`` with weight
    ``(1-u)^alpha`` times the trapezoid rule in the angle.
``cayley``
    centred at the boundary point ``z = 1`` (the pole of the Cayley
    transform): ``z = 1 - 2 s cos(phi) e^{i phi}``, ``s = u^2``, Gauss-Jacobi in
    ``u`` and Gauss-Legendre in ``phi``.  Integrands transported from the
    half-plane are smooth in these coordinates, including at infinity,
    which is why half-plane integrals always use this rule.

Half-plane integrals are pullbacks:
``int_U F dmu_alpha = int_D F(psi z) |psi'(z)|^2 |1-z|^{-2 alpha} dm_alpha(z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from numbers import Number

import numpy as np
from scipy import integrate as sp_integrate
from scipy.special import roots_jacobi

from .conformal import DISK, HALFPLANE, gauss_legendre
from .errors import DivergentTail, IntegrandError, InvalidSpec, NonConvergent
from .fncore import AnalyticExpr, evaluate, pow_branch

# refuse levels whose product rule would exceed this many nodes
NODE_BUDGET = 1 << 21


@dataclass(frozen=True)
class MeasureSpec:
    alpha: float
    domain: str = HALFPLANE

    def __post_init__(self):
        if not self.alpha > -1:
            raise InvalidSpec(f"alpha must exceed -1, got {self.alpha}")
        if self.domain not in (DISK, HALFPLANE):
            raise InvalidSpec(f"unknown domain {self.domain!r}")

    @property
    def gamma(self) -> float:
        """Weight exponent ``(alpha + 2)/p`` at ``p = 1``."""
        return self.alpha + 2

    @property
    def disk_mass(self) -> float:
        return 1.0 / (self.alpha + 1)


@dataclass(frozen=True)
class QuadSpec:
    radial_nodes: int = 64
    angular_nodes: int = 128
    eps: float = 1e-3
    path_nodes: int = 20
    tol: float = 1e-10
    max_depth: int = 8

    def validate(self) -> "QuadSpec":
        if min(self.radial_nodes, self.angular_nodes, self.path_nodes) < 4:
            raise InvalidSpec("node counts must be >= 4")
        if not (0 < self.eps < 0.5):
            raise InvalidSpec(f"eps must lie in (0, 0.5), got {self.eps}")
        if not self.tol > 0:
            raise InvalidSpec("tolerance must be positive")
        if self.max_depth < 1:
            raise InvalidSpec("max_depth must be >= 1")
        return self

    def scaled(self, factor: float) -> "QuadSpec":
        return QuadSpec(
            max(4, int(round(self.radial_nodes * factor))),
            max(4, int(round(self.angular_nodes * factor))),
            self.eps,
            self.path_nodes,
            self.tol,
            self.max_depth,
        )


@lru_cache(maxsize=64)
def _jacobi_unit(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on ``[0, 1]`` for the weight ``(1-u)^alpha``."""
    x, w = roots_jacobi(n, alpha, 0.0)
    return (x + 1) / 2, w * 0.5 ** (alpha + 1)


@lru_cache(maxsize=32)
def polar_rule(n_r: int, n_t: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``z`` and weights ``W`` with ``sum W F(z) ~ int_D F dm_alpha``."""
    u, wu = _jacobi_unit(n_r, alpha)
    theta = 2 * np.pi * (np.arange(n_t) + 0.5) / n_t
    z = np.sqrt(u)[:, None] * np.exp(1j * theta)[None, :]
    W = np.repeat(wu[:, None] / n_t, n_t, axis=1)
    _readonly(z, W)
    return z.ravel(), W.ravel()


@lru_cache(maxsize=32)
def _cayley_coords(n_u: int, n_phi: int, alpha: float):
    u, wu = _jacobi_unit(n_u, alpha)
    phi, wphi = gauss_legendre(n_phi, -math.pi / 2, math.pi / 2)
    U, PHI = np.meshgrid(u, phi, indexing="ij")
    WW = np.outer(wu, wphi)
    return U, PHI, WW


@lru_cache(maxsize=32)
def cayley_disk_rule(n_u: int, n_phi: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Boundary-centred rule for ``int_D G dm_alpha``; returns ``(z, W)``."""
    U, PHI, WW = _cayley_coords(n_u, n_phi, alpha)
    s, c = U ** 2, np.cos(PHI)
    z = 1 - 2 * s * c * np.exp(1j * PHI)
    W = WW * (4 * c * c) ** (alpha + 1) * (1 + U) ** alpha * U ** (2 * alpha + 3) * 2 / np.pi
    _readonly(z, W)
    return z.ravel(), W.ravel()


@lru_cache(maxsize=32)
def halfplane_rule(n_u: int, n_phi: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Pullback rule for ``int_U F dmu_alpha``; returns ``(w, W)``.

    Nodes are ``psi(z)`` for the cayley disk nodes, written in closed form
    ``w = tan(phi)/s + i (1-s)/s`` to avoid cancellation near ``z = 1``, and the
    weights carry ``|psi'|^2 |1-z|^{-2 alpha} = 4 |1-z|^{-4-2 alpha}``.
    """
    U, PHI, WW = _cayley_coords(n_u, n_phi, alpha)
    s, c = U ** 2, np.cos(PHI)
    one_minus_s = (1 - U) * (1 + U)
    w = np.tan(PHI) / s + 1j * one_minus_s / s
    rho = 2 * s * c
    Wd = WW * (4 * c * c) ** (alpha + 1) * (1 + U) ** alpha * U ** (2 * alpha + 3) * 2 / np.pi
    W = Wd * 4 * rho ** (-4 - 2 * alpha)
    _readonly(w, W)
    return w.ravel(), W.ravel()


def _readonly(*arrays):
    for a in arrays:
        a.flags.writeable = False


def rule_nodes(m: MeasureSpec, q: QuadSpec, level: int = 0, rule: str | None = None):
    """Nodes and weights of the product rule at refinement ``level`` (node counts times ``2^level``)."""
    n1, n2 = q.radial_nodes << level, q.angular_nodes << level
    if n1 * n2 > NODE_BUDGET:
        raise NonConvergent(f"node budget exceeded at level {level}", depth=level)
    rule = rule or ("polar" if m.domain == DISK else "cayley")
    if m.domain == HALFPLANE:
        if rule != "cayley":
            raise InvalidSpec("half-plane integrals are always Cayley pullbacks")
        return halfplane_rule(n1, n2, float(m.alpha))
    if rule == "polar":
        return polar_rule(n1, n2, float(m.alpha))
    if rule == "cayley":
        return cayley_disk_rule(n1, n2, float(m.alpha))
    raise InvalidSpec(f"unknown rule {rule!r}")


def _as_integrand(F):
    if isinstance(F, AnalyticExpr):
        return lambda w: evaluate(F, w)
    if isinstance(F, Number):
        c = complex(F)
        return lambda w: np.full(np.shape(w), c)
    return F


def integrate_weighted(F, m: MeasureSpec, q: QuadSpec = QuadSpec(), rule: str | None = None,
                       full_output: bool = False):
    """Integrate ``F`` against ``dm_alpha`` (disk) or ``dmu_alpha`` (half-plane).

    The rule is refined by doubling both node counts until two successive
    estimates agree to ``q.tol * max(1, |I|)``.

    Parameters
    ----------
    F : callable or AnalyticExpr
        Vectorized integrand evaluated on an array of points.
    m : MeasureSpec
    q : QuadSpec
    rule : {"polar", "cayley"}, optional
        Disk rule; the half-plane always uses the Cayley pullback.
    full_output : bool
        Return ``(value, error_estimate, level)`` instead of the value.

    Raises
    ------
    NonConvergent
        If the estimates fail to settle within ``q.max_depth`` levels or the
        node budget.
    """
    q.validate()
    F = _as_integrand(F)
    estimates = []
    for level in range(q.max_depth + 1):
        try:
            nodes, weights = rule_nodes(m, q, level, rule)
        except NonConvergent as exc:
            raise NonConvergent(
                f"no convergence before node budget: last estimates {estimates[-2:]}",
                estimates[-2:], level) from exc
        vals = np.asarray(F(nodes))
        if not np.all(np.isfinite(vals)):
            raise IntegrandError("integrand is not finite on the quadrature nodes")
        est = complex(np.sum(weights * vals))
        estimates.append(est)
        if level:
            err = abs(est - estimates[-2])
            if err <= q.tol * max(1.0, abs(est)):
                return (est, err, level) if full_output else est
    raise NonConvergent(f"no convergence within depth {q.max_depth}: {estimates[-2:]}",
                        estimates[-2:], q.max_depth)


# -- one-dimensional path integrals ----------------------------------------

def _callable(h):
    if isinstance(h, AnalyticExpr):
        return lambda z: evaluate(h, z)
    return h


def integrate_ray(h, omega: complex, kind: str, lam: complex, q: QuadSpec = QuadSpec()) -> complex:
    """``int z^{-(lam+1)} h(z) dz`` from ``omega`` to infinity (``outward``) or from 0 to ``omega`` (``to_origin``).

    The path is ``z = e^s omega``; ``arg z`` stays fixed so the principal power
    never meets its cut.  The infinite end is truncated once the integrand
    falls below ``q.tol * 1e-2`` relative to its starting size.
    """
    lam, omega = complex(lam), complex(omega)
    hf = _callable(h)
    if kind == "outward":
        sign, need = 1.0, lam.real > 0
    elif kind == "to_origin":
        sign, need = -1.0, lam.real < 0
    else:
        raise ValueError(f"unknown ray kind {kind!r}")
    if not need:
        raise DivergentTail(f"{kind} ray integral needs Re(lam) {'>' if sign > 0 else '<'} 0, got {lam}")

    def g(s):
        z = np.exp(sign * s) * omega
        return pow_branch(z, -(lam + 1)) * hf(z) * z

    g0 = abs(g(0.0))
    scale = max(g0, 1e-300)
    cutoff = q.tol * 1e-2 * max(1.0, scale)
    S, prev = 1.0 / abs(lam.real), None
    while True:
        mag = abs(g(S))
        if mag < cutoff and abs(g(2 * S)) < cutoff:
            break
        if S > 1e4 or (prev is not None and mag > 10 * prev and S > 50 / abs(lam.real)):
            raise DivergentTail(f"integrand does not decay along the ray from {omega}")
        prev, S = mag, 2 * S
    val, err = sp_integrate.quad(g, 0.0, S, complex_func=True, epsabs=q.tol * 1e-2,
                                 epsrel=q.tol, limit=1000)
    return complex(val)


def laplace_resolvent_quad(orbit, lam: complex, q: QuadSpec = QuadSpec(), inverse_orbit=None):
    """``int_0^inf e^{-lam t} orbit(t) dt`` by composite Gauss-Legendre panels.

    For ``Re(lam) < 0`` the inverse orbit is used instead,
    ``-int_0^inf e^{lam t} inverse_orbit(t) dt``.  ``orbit(t)`` takes a 1-d
    array of times and returns an array whose first axis runs over ``t``; the
    remaining axes (e.g. many evaluation points) are carried through.
    """
    lam = complex(lam)
    if lam.real == 0:
        raise ValueError("Laplace resolvent needs Re(lam) != 0")
    if lam.real > 0:
        fn, rate, sign = orbit, lam, 1.0
    else:
        if inverse_orbit is None:
            raise ValueError("Re(lam) < 0 needs the inverse orbit")
        fn, rate, sign = inverse_orbit, -lam, -1.0

    probe_t = np.linspace(0.0, 40.0 / rate.real, 81)
    M = float(np.max(np.abs(np.asarray(fn(probe_t)))))
    if not math.isfinite(M):
        raise NonConvergent("orbit is not finite on the probe times")
    T = max(1.0, math.log(max(M, 1e-300) / (q.tol * 1e-2)) / rate.real) if M > 0 else 1.0
    width = 2.0 / max(1.0, abs(rate))
    panels = max(1, math.ceil(T / width))
    n = q.path_nodes
    prev = None
    for level in range(q.max_depth + 1):
        P = panels << level
        x, wx = np.polynomial.legendre.leggauss(n)
        edges = np.linspace(0.0, T, P + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        t = (edges[:-1, None] + half[:, None] * (x[None, :] + 1)).ravel()
        wt = (half[:, None] * wx[None, :]).ravel()
        vals = np.asarray(fn(t))
        kern = wt * np.exp(-rate * t)
        est = sign * np.tensordot(kern, vals, axes=(0, 0))
        if prev is not None:
            err = np.max(np.abs(est - prev))
            if err <= q.tol * max(1.0, float(np.max(np.abs(est)))):
                return complex(est) if np.ndim(est) == 0 else est
        prev = est
    raise NonConvergent(f"Laplace quadrature did not settle (lam={lam})", depth=q.max_depth)
