import numpy as np
import pytest

from lgduality.dolbeault import export_eta
from lgduality.vres import (
    QuadratureSpec,
    ResolutionTooCoarse,
    SingularOnSphere,
    compare_exact_residue,
    integrate_eta,
    orientation_sign,
    radius_independence,
    sphere_point,
    virtual_residue,
)
from regression import poly, section

N1 = QuadratureSpec(1.0, 256, 1e-8)
N2 = QuadratureSpec(1.0, 64, 1e-3)


def test_unit_examples():
    r = virtual_residue(poly("1", 1), poly("1", 1), section("[z1]", 1), N1)
    assert abs(r.value + 1) < 1e-10
    r = virtual_residue(poly("1", 2), poly("1", 2), section("[z1, z2]", 2), N2)
    assert abs(r.value + 1) < 1e-3
    r = virtual_residue(poly("0", 1), poly("1", 1), section("[z1]", 1), N1)
    assert r.value == 0


def test_circle_orientation_against_analytic_integral():
    # counterclockwise circle: the integral of dz/z is 2 pi i
    assert orientation_sign(1) == 1
    t = 2 * np.pi * np.arange(64) / 64
    (z,), ((dz,),) = sphere_point(1, 1.0, [t])
    assert abs(np.sum(dz / z) * 2 * np.pi / 64 - 2j * np.pi) < 1e-12


def test_s3_orientation_via_ball_volume():
    """Boundary orientation check: the integral of x1 dy1 dx2 dy2 over S^3
    with the computed orientation equals the volume of the unit 4-ball."""
    K = 32
    x, gw = np.polynomial.legendre.leggauss(K)
    th = (x + 1) * np.pi / 4
    ph = 2 * np.pi * np.arange(K) / K
    T, P1, P2 = np.meshgrid(th, ph, ph, indexing="ij")
    W = (gw * np.pi / 4)[:, None, None] * (2 * np.pi / K) ** 2
    (z1, z2), tang = sphere_point(2, 1.0, [T, P1, P2])
    # rows: dy1, dx2, dy2 applied to the three tangent vectors
    rows = [[v.imag for v in tang[0]], [v.real for v in tang[1]], [v.imag for v in tang[1]]]
    M = np.stack([np.stack(r, -1) for r in rows], -2)
    val = np.sum(z1.real * np.linalg.det(M) * W) * orientation_sign(2)
    assert abs(val - np.pi ** 2 / 2) < 1e-10


@pytest.mark.parametrize("n,params", [
    (1, [0.3]),
    (2, [0.2, 1.1, 4.0]),
    (2, [1.3, 5.5, 0.7]),
])
def test_tangents_match_finite_differences(n, params):
    h = 1e-6
    p = [np.array([x]) for x in params]
    _zs, tangents = sphere_point(n, 1.7, p)
    for a in range(len(params)):
        plus = [q + (h if i == a else 0) for i, q in enumerate(p)]
        minus = [q - (h if i == a else 0) for i, q in enumerate(p)]
        zp, _ = sphere_point(n, 1.7, plus)
        zm, _ = sphere_point(n, 1.7, minus)
        for k in range(n):
            assert abs((zp[k][0] - zm[k][0]) / (2 * h) - tangents[k][a][0]) < 1e-7


def test_compare_examples():
    c = compare_exact_residue(poly("1", 1), poly("z1", 1), section("[3*z1^2]", 1), N1)
    assert c["pass"] and abs(c["numeric"].value + 1 / 3) < 1e-10
    c = compare_exact_residue(poly("z1", 2), poly("z2", 2), section("[3*z1^2, 3*z2^2]", 2), N2)
    assert c["pass"] and abs(c["numeric"].value + 1 / 9) < 1e-3
    # g in the ideal
    c = compare_exact_residue(poly("3*z1^2", 2), poly("z2", 2), section("[3*z1^2, 3*z2^2]", 2), N2)
    assert c["pass"] and abs(c["numeric"].value) < 1e-3


def test_radius_examples():
    r = radius_independence(poly("1", 1), poly("1", 1), section("[z1]", 1), [0.5, 1, 2], N1, tol=1e-8)
    assert r["pass"]
    r = radius_independence(poly("1", 1), poly("1", 1), section("[z1]", 1), [1.0], N1)
    assert r["pass"] and r["spread"] == 0


def test_singular_on_sphere():
    with pytest.raises(SingularOnSphere):
        virtual_residue(poly("1", 1), poly("1", 1), section("[z1 - 1]", 1), N1)


def test_resolution_too_coarse():
    spec = QuadratureSpec(1.0, 8, 1e-12)
    with pytest.raises(ResolutionTooCoarse) as err:
        virtual_residue(poly("z1^12", 1), poly("1", 1), section("[z1]", 1), spec)
    assert err.value.error_estimate > 1e-12


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(1.0, 4)
    with pytest.raises(ValueError):
        QuadratureSpec(-1.0, 16)
    with pytest.raises(ValueError):
        integrate_eta(export_eta(poly("1", 1), poly("1", 1), section("[z1]", 1)), 1,
                      QuadratureSpec(1.0, 16, scheme="s3-gauss-legendre"))


def test_error_decreases_with_resolution():
    s = section("[3*z1^2 + z2^2, 2*z1*z2]", 2)
    tree = export_eta(poly("z1", 2), poly("z2^2", 2), s)
    errs = [integrate_eta(tree, 2, QuadratureSpec(1.0, K, 1.0)).error_estimate for K in (8, 16, 32)]
    assert errs[2] <= errs[1] <= errs[0]


def test_linearity_in_g():
    s = section("[3*z1^2, 4*z2^3]", 2)
    h = poly("z2", 2)
    a = virtual_residue(poly("z1*z2", 2), h, s, N2).value
    b = virtual_residue(poly("2 + z1", 2), h, s, N2).value
    c = virtual_residue(poly("z1*z2 + 2 + z1", 2), h, s, N2).value
    assert abs(a + b - c) < 1e-9
