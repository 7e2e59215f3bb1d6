import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvespec.dirac import (
    LatticeError,
    circle_dirac_spectrum,
    dirac_eigenvalue,
    dirac_eigenvalue_from_lattice,
    dirac_minimum,
    dual_lattice,
    hopf_lattice,
    isoperimetric_admissible,
    lens_lattice,
)
from oracles import brute_dirac_minimum, random_admissible


def test_hopf_lattice_basis():
    lat = hopf_lattice(3.0, 2.0)
    assert lat.v1 == (2 * math.pi, 0.0)
    assert lat.v2 == (1.0, 1.5)
    assert lat.theta == 1.0
    assert lat.spin == (0, 1)
    assert lat.covolume == pytest.approx(2 * math.pi * 1.5)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 50), st.floats(0.01, 4 * math.pi - 0.01))
def test_hopf_dual_closed_form(L, A):
    lat = hopf_lattice(L, A)
    np.testing.assert_allclose(lat.dual1, (1 / (2 * math.pi), -A / (2 * math.pi * L)), rtol=1e-12, atol=1e-15)
    np.testing.assert_allclose(lat.dual2, (0.0, 2 / L), rtol=1e-12, atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10))
def test_dual_pairing(a, b, c, d):
    if abs(a * d - b * c) < 1e-3:
        return
    w1, w2 = dual_lattice((a, b), (c, d))
    gram = np.array([[a, b], [c, d]]) @ np.array([w1, w2]).T
    np.testing.assert_allclose(gram, np.eye(2), atol=1e-12 * max(1, abs(a), abs(b), abs(c), abs(d)) ** 2)


def test_dependent_basis():
    with pytest.raises(LatticeError):
        dual_lattice((1.0, 2.0), (2.0, 4.0))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.5, 20), st.floats(0, 4 * math.pi), st.integers(1, 5), st.integers(-6, 6), st.integers(-6, 6))
def test_formula_matches_lattice_norm(L, A, m, k, l):
    lat = lens_lattice(L, A, m)
    want = dirac_eigenvalue(L, A, m, k, l)
    assert dirac_eigenvalue_from_lattice(lat, k, l) == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_reference_cases():
    r = dirac_minimum(2 * math.pi, 2 * math.pi)
    assert r.value == 1.0
    assert r.argmin == (0, 0)
    assert dirac_minimum(1.0, 0.0, 3).value == pytest.approx(4 * math.pi**2, rel=1e-15)


def test_random_admissible_against_brute_force():
    rng = np.random.default_rng(20261019)
    for _ in range(300):
        L, A, m = random_admissible(rng)
        r = dirac_minimum(L, A, m)
        assert r.admissible
        assert r.value == pytest.approx(4 * math.pi**2 / L**2, rel=1e-12)
        assert r.value == pytest.approx(brute_dirac_minimum(L, A, m), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 10), st.floats(0, 4 * math.pi), st.integers(1, 5))
def test_any_input_against_brute_force(L, A, m):
    # also inadmissible pairs, where the minimum may sit at k != 0
    r = dirac_minimum(L, A, m)
    # the best l grows like k m A / (4 pi), so the l window must follow k
    window = max(50, r.k_window + 2)
    l_window = max(50, int(window * m * A / (4 * math.pi)) + 2)
    assert r.value == pytest.approx(brute_dirac_minimum(L, A, m, window, l_window), rel=1e-12, abs=1e-12)
    assert dirac_eigenvalue(L, A, m, r.k, r.l) == r.value


def test_inadmissible_beats_bound():
    # a long thin region: small L for the area
    r = dirac_minimum(1.0, 2 * math.pi, 1)
    assert not r.admissible
    assert r.value < 4 * math.pi**2
    assert r.k != 0


def test_tie_break_prefers_small_indices():
    # lambda^2(0, 0) = lambda^2(0, -1); the non-negative index wins
    r = dirac_minimum(5.0, 1.0)
    assert r.argmin == (0, 0)


def test_isoperimetric_flag():
    assert isoperimetric_admissible(2 * math.pi, 2 * math.pi)
    assert not isoperimetric_admissible(1.0, 2 * math.pi)
    assert isoperimetric_admissible(1.0, 0.0)


def test_circle_spectrum():
    vals = circle_dirac_spectrum(2 * math.pi, 4)
    np.testing.assert_allclose(vals, [0.25, 2.25, 6.25, 12.25])
    with pytest.raises(LatticeError):
        circle_dirac_spectrum(0.0, 3)


@pytest.mark.parametrize("L, A, m", [(-1, 0, 1), (0, 1, 1), (1, -0.1, 1), (1, 13, 1), (1, 1, 0)])
def test_domain_errors(L, A, m):
    with pytest.raises(LatticeError):
        dirac_minimum(L, A, m)
    with pytest.raises(LatticeError):
        lens_lattice(L, A, m)
