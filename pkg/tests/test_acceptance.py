"""Acceptance criteria, one test each.

Every test appends a ``PASS``/``FAIL`` line that is printed in the pytest
terminal summary (and directly when this file is run as a script).
"""

import json
import math

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from curvespec.analysis import AnalysisOptions, analyze_curve
from curvespec.cli import RunConfig, cmd_table
from curvespec.curves import TABLE_CURVES, catalog_names, load_catalog
from curvespec.dirac import dirac_minimum, hopf_lattice
from curvespec.expr import differentiate, evaluate
from curvespec.geometry import reparametrize, spherical_area
from curvespec.sturm1d import Potential, eigenvalues_1d, fd_oracle, hill_mu1
from oracles import (
    brute_dirac_minimum,
    catalog_geometry,
    random_admissible,
    random_expr,
    solid_angle_area,
    sphere_circle,
    sphere_circle_area,
)

RADII = (0.3, 0.6, 0.9)


def record(number: int, name: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def circle_reports():
    return {r: analyze_curve(sphere_circle(r), AnalysisOptions(enable_2d=True)) for r in RADII}


def test_01_table():
    out, code = cmd_table(RunConfig(format="json"))
    rows = json.loads(out)["rows"]
    tol = {"fourpi2_L2": 2e-3, "mu1": 1e-2, "mean_k2": 2e-3}
    worst = {}
    ok = code == 0
    for row in rows:
        for col, t in tol.items():
            dev = abs(row[col] - row[f"ref_{col}"]) / abs(row[f"ref_{col}"])
            worst[col] = max(worst.get(col, 0.0), dev)
            ok &= dev <= t
    detail = ", ".join(f"max rel dev {c} {worst[c]:.1e} (tol {tol[c]:.0e})" for c in tol)
    record(1, "TABLE", ok and len(rows) == 5, detail)


def test_02_equality_case(circle_reports):
    ok = True
    worst = 0.0
    for r, rep in circle_reports.items():
        want = 1 / r**2
        dev = max(abs(rep.mu1_1d - want), abs(rep.four_pi2_over_L2 - want)) / want
        worst = max(worst, dev)
        ok &= dev <= 1e-8 and rep.equality_case
    record(2, "EQUALITY CASE", ok, f"circles r={RADII}: max rel dev {worst:.1e} (tol 1e-8), equality_case set")


def test_03_2d_equality(circle_reports):
    worst = 0.0
    for r, rep in circle_reports.items():
        worst = max(worst, abs(rep.mu1_2d - rep.four_pi2_over_L2) / rep.four_pi2_over_L2)
    spiral = analyze_curve(load_catalog("spherical-spiral"), AnalysisOptions(enable_2d=True))
    margin = spiral.mu1_2d - spiral.four_pi2_over_L2
    ok = worst <= 1e-7 and margin >= -1e-8
    record(
        3,
        "2D-EQ",
        ok,
        f"circles max rel dev {worst:.1e} (tol 1e-7); spiral mu1_2d {spiral.mu1_2d:.6f} "
        f">= 4pi^2/L^2 {spiral.four_pi2_over_L2:.6f}",
    )


def test_04_analytic_spectrum():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(20):
        L = float(rng.uniform(0.2, 30))
        c = float(rng.uniform(-10, 10))
        spec = eigenvalues_1d(Potential.constant(L, c), 10)
        n = np.array([0, 1, 1, 2, 2, 3, 3, 4, 4, 5])
        want = 4 * (2 * math.pi * n / L) ** 2 + c
        worst = max(worst, float(np.max(np.abs(spec.eigenvalues - want) / np.maximum(np.abs(want), 1e-300))))
    record(4, "ANALYTIC SPECTRUM", worst <= 1e-10, f"20 random (L, c), first 10 eigenvalues, max rel dev {worst:.1e}")


def test_05_oracle_equivalence():
    worst = {}
    for name in TABLE_CURVES:
        p = Potential.from_geometry(catalog_geometry(name))
        hill = eigenvalues_1d(p, 5)
        fd = fd_oracle(p, J=1024, k_max=5)
        worst[name] = float(np.max(np.abs(hill.eigenvalues - fd.eigenvalues)))
    ok = max(worst.values()) <= 1e-5
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    record(5, "ORACLE EQUIVALENCE", ok, f"max |Hill - FD| mu1..mu5: {detail} (tol 1e-5)")


def test_06_spectral_convergence():
    change = {}
    for name in catalog_names():
        p = Potential.from_geometry(catalog_geometry(name))
        change[name] = abs(float(hill_mu1(p, 128)[0]) - float(hill_mu1(p, 64)[0]))
    bad = [k for k, v in change.items() if not v < 1e-8]
    detail = ", ".join(f"{k} {v:.1e}" for k, v in change.items())
    if bad:
        detail += f"; exceeds 1e-8: {', '.join(bad)}"
    record(6, "SPECTRAL CONVERGENCE", not bad, f"|mu1(128) - mu1(64)|: {detail}")


def test_07_dirac_minimum():
    rng = np.random.default_rng(7)
    worst_bound = worst_brute = 0.0
    for _ in range(1000):
        L, A, m = random_admissible(rng)
        value = dirac_minimum(L, A, m).value
        bound = 4 * math.pi**2 / L**2
        worst_bound = max(worst_bound, abs(value - bound) / bound)
        worst_brute = max(worst_brute, abs(value - brute_dirac_minimum(L, A, m)) / bound)
    ok = worst_bound <= 1e-12 and worst_brute <= 1e-12
    record(7, "DIRAC MINIMUM", ok, f"1000 cases: rel dev vs 4pi^2/L^2 {worst_bound:.1e}, vs brute force {worst_brute:.1e}")


def test_08_dual_lattice():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        L = float(rng.uniform(0.1, 50))
        A = float(rng.uniform(0.01, 4 * math.pi - 0.01))
        lat = hopf_lattice(L, A)
        want = np.array([[1 / (2 * math.pi), -A / (2 * math.pi * L)], [0.0, 2 / L]])
        worst = max(worst, float(np.max(np.abs(lat.dual_basis - want))))
    record(8, "DUAL LATTICE", worst <= 1e-12, f"100 random (L, A): max abs dev {worst:.1e}")


def test_09_inequality_suite():
    failed = []
    for name in catalog_names():
        rep = analyze_curve(load_catalog(name))
        for flag in ("fenchel_ok", "cauchy_schwarz_ok", "theorem1_ok", "upper_bound_ok"):
            if rep.flags[flag] is not True:
                failed.append(f"{name}:{flag}")
    detail = f"{len(catalog_names())} curves x 4 flags" + (f"; failed {failed}" if failed else "")
    record(9, "INEQUALITY SUITE", not failed, detail)


def test_10_area_oracle():
    g = catalog_geometry("spherical-spiral")
    a = spherical_area(g, allow_self_intersection=True)
    d = abs(a - solid_angle_area(load_catalog("spherical-spiral"))) % (4 * math.pi)
    spiral_dev = min(d, 4 * math.pi - d)
    circle_dev = 0.0
    for r in np.arange(1, 10) / 10:
        geom = reparametrize(sphere_circle(float(r)), 512)
        circle_dev = max(circle_dev, abs(spherical_area(geom) - sphere_circle_area(float(r))))
    ok = spiral_dev <= 1e-6 and circle_dev <= 1e-9
    record(10, "AREA ORACLE", ok, f"spiral vs solid angle {spiral_dev:.1e} (tol 1e-6); circles vs closed form {circle_dev:.1e} (tol 1e-9)")


def test_11_derivative_property():
    rng = np.random.default_rng(11)
    h = 1e-5
    worst = 0.0
    for _ in range(1000):
        e = random_expr(rng)
        t = rng.uniform(-2, 2, 100)
        fd = (evaluate(e, t + h) - evaluate(e, t - h)) / (2 * h)
        v = evaluate(differentiate(e), t)
        worst = max(worst, float(np.max(np.abs(v - fd) / (1 + np.abs(v)))))
    record(11, "DERIVATIVE PROPERTY", worst <= 1e-6, f"1000 trees x 100 points, max |d - fd| / (1 + |d|) = {worst:.1e}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
