import math

import numpy as np
import pytest

from curvespec.geometry import reparametrize
from curvespec.schrodinger2d import Operator2DSpec, mode_reduce, mu1_2d
from curvespec.sturm1d import Potential, assemble_hill, eigenvalues_1d
from oracles import catalog_geometry, sphere_circle, sphere_circle_area


def circle_spec(r, M=256):
    g = reparametrize(sphere_circle(r), M)
    return Operator2DSpec(g.L, g.area, Potential.from_geometry(g))


@pytest.fixture(scope="module")
def spiral_potential():
    g = catalog_geometry("spherical-spiral")
    return g, Potential.from_geometry(g)


def test_mode_zero_is_hill(spiral_potential):
    g, p = spiral_potential
    spec = Operator2DSpec(g.L, 1.3, p)
    np.testing.assert_array_equal(mode_reduce(spec, 0, 32).data, assemble_hill(p, 32).data)


def test_zero_area_shifts_by_m2(spiral_potential):
    g, p = spiral_potential
    spec = Operator2DSpec(g.L, 0.0, p)
    base = assemble_hill(p, 32).data
    for m in (-3, 1, 2):
        np.testing.assert_allclose(mode_reduce(spec, m, 32).data, base + m * m * np.eye(65), atol=1e-12)


def test_constant_potential_entry():
    L, A, c = 5.0, 2.0, 0.7
    spec = Operator2DSpec(L, A, Potential.constant(L, c))
    h = mode_reduce(spec, 1, 8).data
    assert h[8, 8] == pytest.approx(1 + A**2 / L**2 + c, rel=1e-14)


def test_zero_area_equals_1d(spiral_potential):
    g, p = spiral_potential
    mu1 = eigenvalues_1d(p, 1)
    res = mu1_2d(Operator2DSpec(g.L, 0.0, p), mu1.metadata["N"])
    assert abs(res.mu1 - mu1[0]) <= 1e-10
    assert res.mode == 0


@pytest.mark.parametrize("r", [0.3, 0.6, 0.9])
@pytest.mark.parametrize("sign", [+1, -1])
def test_circle_equality_both_signs(r, sign):
    res = mu1_2d(circle_spec(r), 32, cross_sign=sign)
    assert res.mu1 == pytest.approx(1 / r**2, rel=1e-10)


def test_circle_data_matches_closed_form():
    spec = circle_spec(0.6)
    assert spec.L == pytest.approx(2 * math.pi * 0.6, rel=1e-13)
    assert spec.A == pytest.approx(sphere_circle_area(0.6), abs=1e-12)
    assert spec.admissible


def test_wider_window_changes_nothing(spiral_potential):
    g, p = spiral_potential
    for A in (0.5, g.area, 9.0):
        spec = Operator2DSpec(g.L, A, p)
        a = mu1_2d(spec, 64)
        b = mu1_2d(spec, 64, extra_modes=5)
        assert a.mu1 == b.mu1
        assert len(b.modes_scanned) == len(a.modes_scanned) + 10


def test_pruning_bound_is_valid():
    # tiny L makes the m-dependence strong; brute force over a wide window
    L = 0.5
    s = L * np.arange(256) / 256
    p = Potential(L, 30 * np.cos(2 * math.pi * s / L) ** 2)
    spec = Operator2DSpec(L, 0.1, p)
    res = mu1_2d(spec, 16)
    brute = min(np.linalg.eigvalsh(mode_reduce(spec, m, 16).data)[0] for m in range(-12, 13))
    # the kinetic diagonal reaches ~1.6e5, so solvers agree to ~eps * 1e5
    assert res.mu1 == pytest.approx(brute, abs=1e-9)


def test_complementary_area(spiral_potential):
    g, p = spiral_potential
    N = 128
    for A in (1.0, 4.0):
        a = mu1_2d(Operator2DSpec(g.L, A, p), N).mu1
        b = mu1_2d(Operator2DSpec(g.L, 4 * math.pi - A, p), N).mu1
        assert a == pytest.approx(b, abs=1e-9)


def test_spiral_bound(spiral_potential):
    g, p = spiral_potential
    res = mu1_2d(Operator2DSpec(g.L, min(g.area, 4 * math.pi - g.area), p), 128)
    assert res.mu1 >= 4 * math.pi**2 / g.L**2 - 1e-8


def test_reduced_matrices_are_hermitian(spiral_potential):
    g, p = spiral_potential
    spec = Operator2DSpec(g.L, 2.0, p)
    for m in (-2, 0, 3):
        h = mode_reduce(spec, m, 16).data
        np.testing.assert_array_equal(h, h.conj().T)


def test_validation():
    p = Potential.constant(2.0, 1.0)
    with pytest.raises(ValueError):
        Operator2DSpec(2.0, -0.1, p)
    with pytest.raises(ValueError):
        Operator2DSpec(2.0, 4 * math.pi, p)
    with pytest.raises(ValueError):
        Operator2DSpec(3.0, 1.0, p)
    assert not Operator2DSpec(2.0, 2.0, p).admissible
