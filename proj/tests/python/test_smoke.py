import cmath
import json
import math

import pytest

import cgcdress

BUBBLE = {
    "case": "cgc_positive",
    "seed": {"kind": "vacuum"},
    "grid": {"nx": 21, "ny": 21, "hx": 0.1, "hy": 0.1},
    "lambda": [1.0, 0.0],
    "factors": [{"alpha": [2.0, 0.0], "line": {"a": [0.0, 0.5], "b": [0.0, 0.0]}}],
}


def test_run_job_passes_and_reports_invariants():
    report = json.loads(cgcdress.run_job(json.dumps(BUBBLE)))
    assert report["pass"] is True
    assert math.isclose(
        report["measured"]["displacement_bilinear_re"], 16.0 / 9.0, abs_tol=1e-8
    )
    assert math.isclose(
        report["measured"]["normal_bilinear_re"], 5.0 / 3.0, abs_tol=1e-8
    )
    for entry in report["checks"].values():
        assert entry["pass"] is True
        assert entry["value"] <= entry["tolerance"]


def test_surface_points_shape():
    nx, ny, pts = cgcdress.surface_points(json.dumps(BUBBLE), part="real")
    assert (nx, ny) == (21, 21)
    assert len(pts) == 441
    assert all(math.isfinite(c) for p in pts for c in p)


def test_simple_factor_algebra():
    p0 = cgcdress.simple_factor(2.0, 0.5j, 0.0, 0.0)
    for r in range(3):
        for c in range(3):
            want = 1.0 if r == c else 0.0
            assert abs(p0[r][c] - want) < 1e-12
    p = cgcdress.simple_factor(2.0, 0.5j, 0.0, 1.0)
    det = (
        p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1])
        - p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0])
        + p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0])
    )
    assert abs(det - 1.0) < 1e-12


def test_permutability():
    s1, s2 = 0.4 + 0.3j, -0.2 + 0.5j
    samples = [0.7 * cmath.exp(1j * k) for k in range(6)]
    defect = cgcdress.permutability_defect(
        1.7 + 0.6j,
        0.5j * cmath.cos(s1),
        0.5j * cmath.sin(s1),
        2.4 - 0.3j,
        0.5j * cmath.cos(s2),
        0.5j * cmath.sin(s2),
        samples,
    )
    assert defect < 1e-10


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        cgcdress.run_job("{}")
    with pytest.raises(ValueError):
        cgcdress.simple_factor(2.0, 0.5j, 0.0, 2.0)  # spectral point on the pole
    assert set(cgcdress.default_tolerances()) >= {"flatness", "curvature"}
