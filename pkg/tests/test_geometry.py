import math

import numpy as np
import pytest

from curvespec.curves import load_catalog, parse_curve_text
from curvespec.geometry import (
    GeometryError,
    arc_length,
    classify,
    curvature_at,
    is_simple,
    mean_square_curvature,
    reparametrize,
    rotation_number,
    spherical_area,
    total_curvature,
)
from oracles import catalog_geometry, solid_angle_area, sphere_circle, sphere_circle_area, tangent_winding


def curve(x, y, z=None, domain="0 2*pi", name="c"):
    text = f'name = "{name}"\nx = "{x}"\ny = "{y}"\n'
    if z is not None:
        text += f'z = "{z}"\n'
    return parse_curve_text(text + f'domain = "{domain}"')


ELLIPSE = curve("2*cos(t)", "sin(t)")


def test_ellipse_curvature_at_vertex():
    # a / b^2 at the end of the major axis
    assert curvature_at(ELLIPSE, 0.0) == pytest.approx(2.0, rel=1e-14)
    assert curvature_at(ELLIPSE, math.pi / 2) == pytest.approx(0.25, rel=1e-14)


def test_ellipse_length():
    from scipy.special import ellipe

    assert arc_length(ELLIPSE) == pytest.approx(4 * 2 * ellipe(1 - 1 / 4), rel=1e-12)


def test_circle_geometry():
    g = reparametrize(curve("3*cos(t)", "3*sin(t)"), 256)
    assert g.L == pytest.approx(6 * math.pi, rel=1e-13)
    np.testing.assert_allclose(g.kappa, 1 / 3, rtol=1e-12)
    assert g.rotation_number == 1
    # uniform in arc length means uniform in t for a circle
    np.testing.assert_allclose(g.t_grid, 2 * math.pi * np.arange(256) / 256, atol=1e-11)


def test_arc_length_grid_is_uniform():
    g = catalog_geometry("lemniscate")
    seg = np.linalg.norm(np.diff(g.points, axis=1, append=g.points[:, :1]), axis=0)
    # chords never exceed ds beyond the inversion tolerance at both ends
    assert np.all(seg <= g.ds + 2 * g.metadata["inversion_tol"])
    assert np.all(seg >= g.ds * (1 - 1e-3))


@pytest.mark.parametrize("name", ["lemniscate", "trefoil", "circle-r1"])
def test_rotation_number_matches_tangent_unwrapping(name):
    g = catalog_geometry(name)
    assert g.rotation_number == round(tangent_winding(load_catalog(name)))
    assert g.rotation_residual < 1e-9
    assert rotation_number(g) == g.rotation_number


def test_rotation_number_double_circle():
    g = reparametrize(curve("cos(2*t)", "sin(2*t)"), 256)
    assert g.rotation_number == 2


def test_rotation_number_needs_plane():
    with pytest.raises(GeometryError):
        rotation_number(catalog_geometry("viviani"))


def test_classification():
    assert classify(ELLIPSE).kind == "plane"
    assert classify(load_catalog("spherical-spiral")).kind == "unit_sphere"
    assert classify(load_catalog("torus-knot")).kind == "space"
    assert classify(load_catalog("viviani")).kind == "space"  # radius 2
    assert classify(sphere_circle(0.5)).kind == "unit_sphere"
    assert classify(curve("cos(t)", "sin(t)", "2")).kind == "plane"


@pytest.mark.parametrize("r", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
def test_gauss_bonnet_circles(r):
    g = reparametrize(sphere_circle(r), 512)
    assert g.simple
    assert spherical_area(g) == pytest.approx(sphere_circle_area(r), abs=1e-9)
    assert g.area_complement == pytest.approx(4 * math.pi - sphere_circle_area(r), abs=1e-9)


def test_reversed_circle_gets_complement():
    c = curve("0.6*cos(t)", "-0.6*sin(t)", "0.8")
    g = reparametrize(c, 512)
    assert g.area == pytest.approx(4 * math.pi - sphere_circle_area(0.6), abs=1e-9)


def test_spherical_relation():
    # on the unit sphere kappa^2 = 1 + kappa_g^2
    for g in (catalog_geometry("spherical-spiral"), reparametrize(sphere_circle(0.4), 256)):
        np.testing.assert_allclose(g.kappa**2, 1 + g.kappa_g**2, rtol=1e-10)


def test_spiral_area_against_solid_angle():
    g = catalog_geometry("spherical-spiral")
    assert not g.simple  # the spiral crosses itself where cos(4t) = 0
    with pytest.raises(GeometryError, match="intersects"):
        spherical_area(g)
    a = spherical_area(g, allow_self_intersection=True)
    oracle = solid_angle_area(load_catalog("spherical-spiral"))
    d = abs(a - oracle) % (4 * math.pi)
    assert min(d, 4 * math.pi - d) < 1e-6


def test_is_simple():
    t = 2 * math.pi * np.arange(400) / 400
    circle = np.stack([np.cos(t), np.sin(t)])
    assert is_simple(circle, 2 * math.pi)
    figure_eight = np.stack([np.sin(t), np.sin(t) * np.cos(t)])
    assert not is_simple(figure_eight, 6.1)


@pytest.mark.parametrize("name", ["lemniscate", "viviani", "spherical-spiral"])
def test_refinement_invariance(name):
    coarse = catalog_geometry(name, 1024)
    fine = catalog_geometry(name, 2048)
    assert fine.L == coarse.L
    assert abs(mean_square_curvature(fine) - mean_square_curvature(coarse)) <= 1e-9 * mean_square_curvature(fine)
    np.testing.assert_allclose(fine.kappa[::2], coarse.kappa, rtol=1e-10)


def test_shift_invariance():
    c = load_catalog("trefoil")
    a = reparametrize(c, 1024)
    b = reparametrize(c.shifted(0.9), 1024)
    assert b.L == pytest.approx(a.L, rel=1e-12)
    assert mean_square_curvature(b) == pytest.approx(mean_square_curvature(a), rel=1e-9)


@pytest.mark.parametrize("name", ["lemniscate", "trefoil", "viviani", "torus-knot", "spherical-spiral", "circle-r1"])
def test_fenchel_and_cauchy_schwarz(name):
    g = catalog_geometry(name)
    assert total_curvature(g) >= 2 * math.pi - 1e-6
    assert 4 * math.pi**2 / g.L**2 <= mean_square_curvature(g) + 1e-9


def test_sample_count_validated():
    with pytest.raises(GeometryError):
        reparametrize(ELLIPSE, 1000)
    with pytest.raises(GeometryError):
        reparametrize(ELLIPSE, 32)
