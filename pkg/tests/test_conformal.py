import csv
import math

import numpy as np
import pytest
from hypothesis import given, settings

from bergman_dual.conformal import (
    CAYLEY,
    CAYLEY_INV,
    DISK,
    HALFPLANE,
    IDENTITY,
    TO_DISK,
    TO_HALFPLANE,
    MobiusMap,
    cayley,
    cayley_derivative,
    conjugate_to_disk,
    mobius_compose,
    mobius_invert,
    sample_domain,
    scaling_disk_map,
    scaling_disk_parameter,
    scaling_map,
    translation_disk_map,
    translation_disk_parameters,
    translation_map,
)
from bergman_dual.errors import DegenerateMap, InvalidSpec, OutsideDomain
from bergman_dual.quad import QuadSpec

from strategies import mobius_maps


def test_cayley_examples():
    assert cayley(0) == pytest.approx(1j)
    assert cayley(1j, TO_DISK) == pytest.approx(0)
    assert cayley(0.5) == pytest.approx(3j)


def test_cayley_outside_domain():
    with pytest.raises(OutsideDomain):
        cayley(1.0)
    with pytest.raises(OutsideDomain):
        cayley(-2j, TO_DISK)
    with pytest.raises(OutsideDomain):
        cayley(np.array([0.1, 1.5j]))


def test_cayley_derivative_matches_map():
    z = 0.3 - 0.4j
    assert CAYLEY.derivative(z) == pytest.approx(cayley_derivative(z))
    assert cayley_derivative(0) == pytest.approx(2j)


def test_determinant_normalized():
    m = MobiusMap(2, 3, 1, 5)
    assert m.det == pytest.approx(1)
    with pytest.raises(DegenerateMap):
        MobiusMap(1, 2, 2, 4)


def test_compose_inverse_is_identity(rng):
    z = rng.normal(size=100) * 0.5 + 1j * rng.normal(size=100) * 0.5
    for m in (CAYLEY, scaling_disk_map(0.7), translation_disk_map(-1.3), MobiusMap(1 + 2j, -1, 0.3j, 2)):
        ident = mobius_compose(m, mobius_invert(m))
        assert np.max(np.abs(ident(z) - z)) <= 1e-12
    assert np.max(np.abs(CAYLEY_INV.compose(CAYLEY)(z) - z)) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(mobius_maps(), mobius_maps())
def test_composition_is_functional(m1, m2):
    z = 0.1 + 0.2j
    den = m2.denominator(z)
    if abs(den) < 1e-3 or abs(m1.denominator(m2(z))) < 1e-3:
        return
    assert mobius_compose(m1, m2)(z) == pytest.approx(m1(m2(z)), rel=1e-10, abs=1e-10)


def test_scaling_conjugate_at_log3():
    t = math.log(3)
    assert scaling_disk_parameter(t) == pytest.approx(-0.5, abs=1e-15)
    h = scaling_disk_map(t)
    assert h(0) == pytest.approx(0.5, abs=1e-15)
    # the closed form equals psi^-1 o phi_{-t} o psi
    g = conjugate_to_disk(scaling_map(-t))
    for z in (0, 0.3j, -0.7 + 0.1j):
        assert g(z) == pytest.approx(h(z), abs=1e-14)


def test_translation_conjugate_at_2():
    a, b = translation_disk_parameters(2.0)
    assert a == pytest.approx((1 - 1j) / 2, abs=1e-15)
    h = translation_disk_map(2.0)
    assert abs(h(a)) <= 1e-15
    g = conjugate_to_disk(translation_map(-2.0))
    for z in (0, 0.3j, -0.7 + 0.1j):
        assert g(z) == pytest.approx(h(z), abs=1e-14)


@pytest.mark.parametrize("k", range(1, 7))
def test_scaling_parameter_small_t(k):
    assert abs(scaling_disk_parameter(10.0 ** -k)) <= 10.0 ** -k


@pytest.mark.parametrize("t", [0.1, 0.05, 1e-3, 1e-6])
def test_translation_parameters_small_t(t):
    a, b = translation_disk_parameters(t)
    # exact: |a_t| = t/sqrt(4+t^2) and |b_t - 1| = 2t/sqrt(4+t^2)
    total = abs(a) + abs(b - 1)
    assert total == pytest.approx(3 * t / math.sqrt(4 + t * t), rel=1e-12)
    assert total <= 1.5 * t


def test_translation_parameters_exceed_t():
    # the sharper bound |a_t| + |b_t - 1| <= t does not hold: the sum is ~1.5 t
    a, b = translation_disk_parameters(0.01)
    assert abs(a) + abs(b - 1) > 0.01


def test_sample_domain_small_disk():
    g = sample_domain(DISK, QuadSpec(radial_nodes=4, angular_nodes=8, eps=0.1))
    assert g.points.size == 32
    assert np.all(np.abs(g.points) <= 0.9)
    assert g.weights.sum() == pytest.approx(1.0 - 0.1 ** 2 * 0 - (1 - 0.9 ** 2), abs=1e-12)


def test_halfplane_grid_is_image_of_disk_grid():
    q = QuadSpec(radial_nodes=8, angular_nodes=16, eps=0.1)
    d, h = sample_domain(DISK, q), sample_domain(HALFPLANE, q)
    assert np.allclose(h.points, CAYLEY(d.points))
    assert np.all(h.all_points().imag > 0)


def test_refinement_profile_is_monotone():
    q = QuadSpec(radial_nodes=8, angular_nodes=16, eps=0.1, max_depth=6)
    g = sample_domain(DISK, q)
    assert len(g.rings) == 7
    assert np.all(np.diff(g.profile) < 0)
    for ring, dist in zip(g.rings, g.profile):
        assert np.allclose(1 - np.abs(ring), dist)


def test_round_trips_on_grid(q):
    g = sample_domain(DISK, q).points
    assert np.max(np.abs(CAYLEY_INV(CAYLEY(g)) - g)) <= 1e-12
    w = sample_domain(HALFPLANE, QuadSpec(radial_nodes=16, angular_nodes=32)).points
    assert np.max(np.abs(CAYLEY(CAYLEY_INV(w)) - w) / (1 + np.abs(w))) <= 1e-12


def test_invalid_spec():
    with pytest.raises(InvalidSpec):
        sample_domain(DISK, QuadSpec(radial_nodes=3))
    with pytest.raises(InvalidSpec):
        sample_domain(DISK, QuadSpec(eps=0.5))
    with pytest.raises(InvalidSpec):
        sample_domain("annulus", QuadSpec())


def test_grid_csv(tmp_path):
    q = QuadSpec(radial_nodes=4, angular_nodes=8, eps=0.1, max_depth=2)
    g = sample_domain(DISK, q)
    path = tmp_path / "grid.csv"
    g.to_csv(path)
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["re", "im", "weight"]
    assert len(rows) == 1 + 32 + 3 * 8
    assert float(rows[1][2]) > 0 and float(rows[-1][2]) == 0
