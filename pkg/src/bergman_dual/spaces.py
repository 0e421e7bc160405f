"""Norms, seminorms, membership predicates and the duality pairing.

Bloch seminorms are suprema of the weighted derivative ``Im(w)|f'(w)|`` on the
half-plane or ``(1-|z|^2)|f'(z)|`` on the disk.  They are computed by grid
seeding followed by alternating one-dimensional bounded Brent searches around
the best grid point.  A supremum that keeps growing as the grid approaches the
boundary (as seen in the disk picture) is reported as SupDiverging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .conformal import CAYLEY, CAYLEY_INV, DISK, HALFPLANE, cayley_derivative, sample_domain
from .errors import NonPositiveNorm, SupDiverging
from .fncore import AnalyticExpr, MobiusComp, derive, evaluate
from .quad import MeasureSpec, QuadSpec, integrate_weighted

#: relative growth per refinement layer that counts as "still growing"
GROWTH_SLACK = 1e-3
#: boundary distances of the horizontal lines used by little_bloch_profile
PROFILE_DELTAS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)
LITTLE_BLOCH_FACTOR = 1e-3
VANISHING_TOL = 1e-10


@dataclass
class NormReport:
    value: float
    method: str
    resolution: tuple
    est_error: float = 0.0
    argmax: complex | None = None

    def __post_init__(self):
        if self.value < 0 or self.est_error < 0:
            raise ValueError("norm values and error estimates are nonnegative")

    def __float__(self):
        return float(self.value)


@dataclass
class BlochProfile:
    deltas: tuple
    values: tuple
    reference: float
    verdict: bool


@dataclass
class MembershipVerdict:
    """Evidence for membership in the little Bloch space vanishing at ``i``."""

    bloch_finite: bool
    little_bloch: bool
    vanishes_at_i: bool
    evidence: dict = field(default_factory=dict)

    @property
    def in_space(self) -> bool:
        return self.bloch_finite and self.little_bloch and self.vanishes_at_i


def _fn(f):
    if isinstance(f, AnalyticExpr):
        return lambda w: evaluate(f, w)
    return f


@lru_cache(maxsize=16)
def _grid_with_depth(domain: str, q: QuadSpec):
    grid = sample_domain(domain, q)
    pts = grid.all_points()
    zeta = CAYLEY_INV(pts) if domain == HALFPLANE else pts
    dist = 1.0 - np.abs(zeta)
    pts.flags.writeable = False
    return pts, dist


def _weight(domain: str, p):
    if domain == HALFPLANE:
        return np.imag(p)
    return 1.0 - np.abs(p) ** 2


def weighted_derivative_sup(dfun, domain: str, q: QuadSpec = QuadSpec(), tol: float = 1e-13,
                            max_sweeps: int = 60) -> NormReport:
    """Supremum of the weighted derivative given the derivative ``dfun``.

    Raises SupDiverging when the running supremum over the nested boundary
    layers ``1 - |zeta| >= eps 2^-k`` keeps growing over the last two layers.
    """
    dfun = _fn(dfun)
    pts, dist = _grid_with_depth(domain, q)
    vals = _weight(domain, pts) * np.abs(dfun(pts))
    if not np.all(np.isfinite(vals)):
        raise SupDiverging("weighted derivative is not finite on the grid")
    layers = q.eps * 2.0 ** -np.arange(q.max_depth + 1)
    running = np.array([vals[dist >= d - 1e-15].max(initial=0.0) for d in layers])
    overall = float(vals.max())
    top = running[-1]
    if top > 0 and len(running) >= 3:
        g1 = running[-1] > running[-2] * (1 + GROWTH_SLACK)
        g2 = running[-2] > running[-3] * (1 + GROWTH_SLACK)
        if g1 and g2:
            raise SupDiverging(f"supremum still growing at the boundary: {running[-3:]}",
                               profile=running.tolist())
    k = int(np.argmax(vals))
    best_p, best_v = complex(pts[k]), float(vals[k])
    if best_v == 0.0:
        return NormReport(0.0, "sup-search", (q.radial_nodes, q.angular_nodes, q.max_depth), 0.0, best_p)

    def value_at(p):
        v = _weight(domain, p) * abs(dfun(p))
        return float(v) if math.isfinite(v) else -math.inf

    improvement = 0.0
    for _ in range(max_sweeps):
        start = best_v
        for coord in (0, 1):
            p_new, v_new = _line_search(value_at, domain, best_p, coord)
            if v_new > best_v:
                best_p, best_v = p_new, v_new
        improvement = best_v - start
        if improvement <= tol * best_v:
            break
    if not best_v >= overall * (1 - 1e-12):
        best_v = overall
    return NormReport(best_v, "sup-search", (q.radial_nodes, q.angular_nodes, q.max_depth),
                      max(improvement, 0.0), best_p)


def _line_search(value_at, domain, p, coord):
    if domain == HALFPLANE:
        x0, ly0 = p.real, math.log(p.imag)
        if coord == 0:
            span = p.imag
            fun = lambda x: -value_at(complex(x, p.imag))
            lo, hi = x0 - span, x0 + span
            res = minimize_scalar(fun, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13 * max(1, abs(x0))})
            return complex(res.x, p.imag), -res.fun
        fun = lambda ly: -value_at(complex(x0, math.exp(ly)))
        res = minimize_scalar(fun, bounds=(ly0 - 0.5, ly0 + 0.5), method="bounded", options={"xatol": 1e-13})
        return complex(x0, math.exp(res.x)), -res.fun
    r0, t0 = abs(p), math.atan2(p.imag, p.real)
    if coord == 0:
        span = 0.5 * (1 - r0) + 1e-3
        lo, hi = max(0.0, r0 - span), min(1 - 1e-15, r0 + span)
        fun = lambda r: -value_at(r * complex(math.cos(t0), math.sin(t0)))
        res = minimize_scalar(fun, bounds=(lo, hi), method="bounded", options={"xatol": 1e-14})
        return res.x * complex(math.cos(t0), math.sin(t0)), -res.fun
    if r0 == 0:
        return p, value_at(p)
    span = min(math.pi, (1 - r0) / r0 + 1e-3)
    fun = lambda t: -value_at(r0 * complex(math.cos(t), math.sin(t)))
    res = minimize_scalar(fun, bounds=(t0 - span, t0 + span), method="bounded", options={"xatol": 1e-14})
    return r0 * complex(math.cos(res.x), math.sin(res.x)), -res.fun


def bloch_seminorm(f, domain: str = HALFPLANE, q: QuadSpec = QuadSpec()) -> NormReport:
    """``sup Im(w)|f'(w)|`` (half-plane) or ``sup (1-|z|^2)|f'(z)|`` (disk)."""
    return weighted_derivative_sup(derive(f), domain, q)


def bloch_norm(f, q: QuadSpec = QuadSpec()) -> float:
    """``|f(i)| + ||f||_{B_inf,1}`` on the half-plane."""
    return abs(evaluate(f, 1j)) + bloch_seminorm(f, HALFPLANE, q).value


def pulled_back(f: AnalyticExpr) -> AnalyticExpr:
    """``C_psi f = f o psi`` as a disk function."""
    return MobiusComp(CAYLEY, f)


def line_sup(dfun, delta: float, n: int = 801) -> float:
    """``sup_x delta |f'(x + i delta)|`` from a log-spaced seed grid plus Brent refinement."""
    dfun = _fn(dfun)
    mags = np.logspace(-8, 8, n // 2)
    xs = np.concatenate([-mags[::-1], [0.0], mags])
    vals = delta * np.abs(dfun(xs + 1j * delta))
    k = int(np.argmax(vals))
    lo = xs[max(k - 1, 0)]
    hi = xs[min(k + 1, len(xs) - 1)]
    best = float(vals[k])
    if hi > lo:
        res = minimize_scalar(lambda x: -delta * abs(dfun(complex(x, delta))), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-14 * max(1.0, abs(xs[k]))})
        best = max(best, -float(res.fun))
    return best


def little_bloch_profile(f, q: QuadSpec = QuadSpec(), seminorm: float | None = None,
                         deltas=PROFILE_DELTAS) -> BlochProfile:
    """Decay table ``delta -> sup over Im(w) = delta of Im(w)|f'(w)|``.

    Verdict: the last value is below ``1e-3`` times the reference (the
    seminorm if known, else the first profile value) and the last three
    values decrease.
    """
    df = derive(f) if isinstance(f, AnalyticExpr) else f
    values = tuple(line_sup(df, d) for d in deltas)
    if seminorm is not None and math.isfinite(seminorm):
        reference = seminorm
    else:
        reference = values[0]
    tail = values[-3:]
    decreasing = all(b < a for a, b in zip(tail, tail[1:])) or max(tail) == 0.0
    verdict = decreasing and values[-1] <= LITTLE_BLOCH_FACTOR * reference
    return BlochProfile(tuple(deltas), values, reference, bool(verdict))


def membership(f: AnalyticExpr, q: QuadSpec = QuadSpec()) -> MembershipVerdict:
    """Test the three predicates of the little Bloch space vanishing at ``i``."""
    evidence = {}
    try:
        semi = bloch_seminorm(f, HALFPLANE, q).value
        finite = True
    except SupDiverging as exc:
        semi, finite = math.inf, False
        evidence["divergence_profile"] = exc.profile
    evidence["seminorm"] = semi
    profile = little_bloch_profile(f, q, semi if finite else None)
    evidence["profile"] = dict(zip(profile.deltas, profile.values))
    f_i = evaluate(f, 1j)
    evidence["abs_f_i"] = abs(f_i)
    vanishes = abs(f_i) <= VANISHING_TOL * (1 + (semi if finite else 0.0))
    return MembershipVerdict(finite, profile.verdict and finite, bool(vanishes), evidence)


# -- integral norms --------------------------------------------------------

def l1_norm(f, alpha: float, q: QuadSpec = QuadSpec()) -> NormReport:
    """``int_U |f| dmu_alpha`` by Cayley pullback."""
    fn = _fn(f)
    val, err, level = integrate_weighted(lambda w: np.abs(fn(w)), MeasureSpec(alpha, HALFPLANE), q,
                                         full_output=True)
    return NormReport(float(val.real), "quadrature", (q.radial_nodes << level, q.angular_nodes << level), err)


def l1_norm_disk(F, alpha: float, q: QuadSpec = QuadSpec(), rule: str = "cayley") -> NormReport:
    """``int_D |F| dm_alpha``."""
    fn = _fn(F)
    val, err, level = integrate_weighted(lambda z: np.abs(fn(z)), MeasureSpec(alpha, DISK), q,
                                         rule=rule, full_output=True)
    return NormReport(float(val.real), "quadrature", (q.radial_nodes << level, q.angular_nodes << level), err)


def transported_modulus(f, alpha: float):
    """``|S_psi f|(z) = |psi'(z)|^gamma |f(psi(z))|`` with ``gamma = alpha + 2``."""
    fn = _fn(f)
    gamma = alpha + 2

    def F(z):
        return np.abs(cayley_derivative(z)) ** gamma * np.abs(fn(CAYLEY(z)))

    return F


def growth_ratio(f, alpha: float, q: QuadSpec = QuadSpec()) -> float:
    """Empirical constant ``K = sup |f(w)| Im(w)^gamma / ||f||_{L^1}`` over the half-plane grid."""
    norm = l1_norm(f, alpha, q).value
    if not norm > 0:
        raise NonPositiveNorm("growth ratio needs a nonzero L^1 norm")
    pts, _ = _grid_with_depth(HALFPLANE, q)
    vals = np.abs(_fn(f)(pts)) * np.imag(pts) ** (alpha + 2)
    return float(vals.max() / norm)


def pairing(g, f, alpha: float, q: QuadSpec = QuadSpec(), full_output: bool = False):
    """``<g, f> = int_U g conj(f) dmu_alpha``; linear in ``g``, conjugate-linear in ``f``."""
    gf, ff = _fn(g), _fn(f)
    return integrate_weighted(lambda w: gf(w) * np.conj(ff(w)), MeasureSpec(alpha, HALFPLANE), q,
                              full_output=full_output)
