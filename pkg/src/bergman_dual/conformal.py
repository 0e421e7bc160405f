"""Cayley transform, Möbius algebra and sampling grids on the disk and half-plane.

The Cayley transform ``psi(z) = i(1+z)/(1-z)`` maps the unit disk onto the
upper half-plane with inverse ``(w-i)/(w+i)``.  The automorphism families of
the scaling and translation groups, and their disk conjugates
``psi^-1 o phi_{-t} o psi``, are provided as :class:`MobiusMap` constructors.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DegenerateMap, InvalidSpec, OutsideDomain

DISK = "disk"
HALFPLANE = "halfplane"
TO_HALFPLANE = "to_halfplane"
TO_DISK = "to_disk"


@dataclass(frozen=True)
class MobiusMap:
    """The map ``z -> (a z + b)/(c z + d)``, normalized to ``ad - bc = 1``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        det = a * d - b * c
        if det == 0 or not cmath.isfinite(det):
            raise DegenerateMap(f"ad - bc = {det} for ({a}, {b}, {c}, {d})")
        # already-normalized coefficients are kept as is, so that re-normalizing
        # (e.g. after a literal round trip) is an exact no-op
        if abs(det - 1) > 8 * 2.0 ** -52 * (abs(a * d) + abs(b * c)):
            k = cmath.sqrt(det)
            a, b, c, d = a / k, b / k, c / k, d / k
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def denominator(self, z):
        return self.c * z + self.d

    def __call__(self, z):
        return (self.a * z + self.b) / (self.c * z + self.d)

    def derivative(self, z):
        return self.det / (self.c * z + self.d) ** 2

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """Return ``self o other``."""
        return mobius_compose(self, other)

    def inverse(self) -> "MobiusMap":
        return mobius_invert(self)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def __str__(self):
        return f"mobius({_fmt(self.a)}, {_fmt(self.b)}, {_fmt(self.c)}, {_fmt(self.d)})"


def _fmt(x: complex) -> str:
    return f"({x.real!r}{x.imag:+.17g}j)"


def mobius_compose(m1: MobiusMap, m2: MobiusMap) -> MobiusMap:
    """Coefficient-level composition ``m1 o m2``."""
    return MobiusMap(
        m1.a * m2.a + m1.b * m2.c,
        m1.a * m2.b + m1.b * m2.d,
        m1.c * m2.a + m1.d * m2.c,
        m1.c * m2.b + m1.d * m2.d,
    )


def mobius_invert(m: MobiusMap) -> MobiusMap:
    return MobiusMap(m.d, -m.b, -m.c, m.a)


IDENTITY = MobiusMap(1, 0, 0, 1)
CAYLEY = MobiusMap(1j, 1j, -1, 1)
CAYLEY_INV = MobiusMap(1, -1j, 1, 1j)


def cayley(z, direction: str = TO_HALFPLANE):
    """Apply ``psi`` (disk -> half-plane) or ``psi^-1`` (half-plane -> disk).

    Raises OutsideDomain when an input is not strictly inside the source domain.
    """
    arr = np.asarray(z)
    if direction == TO_HALFPLANE:
        if np.any(np.abs(arr) >= 1):
            raise OutsideDomain(f"cayley: input not inside the unit disk: {z!r}")
        out = CAYLEY(arr.astype(complex))
    elif direction == TO_DISK:
        if np.any(np.imag(arr) <= 0):
            raise OutsideDomain(f"cayley: input not in the upper half-plane: {z!r}")
        out = CAYLEY_INV(arr.astype(complex))
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return out if arr.ndim else complex(out)


def cayley_derivative(z):
    """``psi'(z) = 2i/(1-z)^2``."""
    return 2j / (1 - z) ** 2


# -- automorphism families -------------------------------------------------

def scaling_map(t: float) -> MobiusMap:
    """``phi_t(z) = e^{-t} z``."""
    return MobiusMap(math.exp(-t / 2), 0, 0, math.exp(t / 2))


def translation_map(t: float) -> MobiusMap:
    """``phi_t(z) = z + t``."""
    return MobiusMap(1, t, 0, 1)


def scaling_disk_parameter(t: float) -> float:
    """``a_t = (1 - e^t)/(1 + e^t)``; equals ``-tanh(t/2)``."""
    return -math.tanh(t / 2)


def scaling_disk_map(t: float) -> MobiusMap:
    """``h_a(z) = (z - a_t)/(1 - conj(a_t) z)``, the disk conjugate of scaling."""
    a = scaling_disk_parameter(t)
    return MobiusMap(1, -a, -np.conj(a), 1)


def translation_disk_parameters(t: float) -> tuple[complex, complex]:
    """``a_t = t/(2i + t)`` and ``b_t = (2i - t)/(2i + t)``."""
    return t / (2j + t), (2j - t) / (2j + t)


def translation_disk_map(t: float) -> MobiusMap:
    """``h_a(z) = (z - a_t)/(b_t + a_t z)``, the disk conjugate of translation."""
    a, b = translation_disk_parameters(t)
    return MobiusMap(1, -a, a, b)


def conjugate_to_disk(m: MobiusMap) -> MobiusMap:
    """``psi^-1 o m o psi``."""
    return CAYLEY_INV.compose(m).compose(CAYLEY)


# -- grids -----------------------------------------------------------------

@dataclass
class DomainGrid:
    """Sample points inside the disk or the half-plane.

    ``points``/``weights`` is the base tensor grid; ``rings`` are the boundary
    refinement layers at disk radius ``1 - eps 2^-k`` (mapped by ``psi`` for the
    half-plane), with ``profile`` the matching boundary distances.  ``rays``
    holds the extra log-polar seeds used for half-plane sup searches.
    """

    domain: str
    points: np.ndarray
    weights: np.ndarray
    eps: float
    rings: list = field(default_factory=list)
    profile: np.ndarray = field(default_factory=lambda: np.zeros(0))
    rays: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def all_points(self) -> np.ndarray:
        parts = [self.points, *self.rings]
        if self.rays.size:
            parts.append(self.rays)
        return np.concatenate(parts)

    def to_csv(self, path) -> None:
        """Write ``re,im,weight`` rows; ring and ray seeds carry weight 0."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["re", "im", "weight"])
            for p, wt in zip(self.points, self.weights):
                writer.writerow([f"{p.real:.12e}", f"{p.imag:.12e}", f"{wt:.12e}"])
            extra = [*self.rings, self.rays] if self.rays.size else list(self.rings)
            for ring in extra:
                for p in ring:
                    writer.writerow([f"{p.real:.12e}", f"{p.imag:.12e}", f"{0.0:.12e}"])


@lru_cache(maxsize=64)
def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1), half * w


def sample_domain(domain: str, q) -> DomainGrid:
    """Build the sampling grid described by the QuadSpec ``q``.

    Disk: Gauss-Legendre radii on ``[0, 1 - eps]`` times uniform angles, plus
    refinement rings at ``1 - eps 2^-k`` for ``k = 0..q.max_depth``.  Half-plane:
    the image of the disk grid under ``psi`` plus log-polar rays.
    """
    q.validate()
    nr, nt, eps = q.radial_nodes, q.angular_nodes, q.eps
    r, wr = gauss_legendre(nr, 0.0, 1.0 - eps)
    theta = 2 * np.pi * (np.arange(nt) + 0.5) / nt
    rr, tt = np.meshgrid(r, theta, indexing="ij")
    pts = (rr * np.exp(1j * tt)).ravel()
    wts = (np.outer(wr * r, np.full(nt, 2.0 / nt))).ravel()
    radii = 1.0 - eps * 2.0 ** -np.arange(q.max_depth + 1)
    rings = [radius * np.exp(1j * theta) for radius in radii]
    profile = 1.0 - radii
    if domain == DISK:
        return DomainGrid(DISK, pts, wts, eps, rings, profile)
    if domain == HALFPLANE:
        wpts = CAYLEY(pts)
        wrings = [CAYLEY(ring) for ring in rings]
        nrays = max(8, nt // 8)
        args = np.pi * (np.arange(nrays) + 0.5) / nrays
        mods = np.logspace(-6, 6, 4 * nr)
        rays = (mods[:, None] * np.exp(1j * args)[None, :]).ravel()
        return DomainGrid(HALFPLANE, wpts, wts, eps, wrings, profile, rays)
    raise InvalidSpec(f"unknown domain {domain!r}")
