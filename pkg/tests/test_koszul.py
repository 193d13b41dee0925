import itertools

import pytest

from lgduality.polyring import GaussianRational

from lgduality.koszul import (
    NonIsolatedZero,
    NotQuasiHomogeneous,
    euler_characteristic,
    koszul_differential_matrix,
    koszul_homology_graded,
    milnor_algebra,
)
from regression import gradient_section, regression_sections, section


def hilbert_series(weights, degrees, top):
    """Coefficients of prod (1 - t^d_i) / (1 - t^w_i) up to ``top``."""
    coeffs = [1] + [0] * top
    for d in degrees:
        coeffs = [coeffs[k] - (coeffs[k - d] if k >= d else 0) for k in range(top + 1)]
    for w in weights:
        out = list(coeffs)
        for k in range(w, top + 1):
            out[k] += out[k - w]
        coeffs = out
    return coeffs


def test_milnor_examples():
    A = milnor_algebra(section("[3*z1^2, 3*z2^2]", 2))
    assert A.mu == 4
    assert set(A.basis) == {(0, 0), (1, 0), (0, 1), (1, 1)}
    A = milnor_algebra(section("[z1, z2]", 2))
    assert A.mu == 1 and A.basis_labels() == ["1"]


@pytest.mark.parametrize("k", range(1, 7))
def test_milnor_number_a_k(k):
    assert milnor_algebra(gradient_section(f"z1^{k + 1}", 1)).mu == k


def test_non_isolated():
    with pytest.raises(NonIsolatedZero):
        milnor_algebra(section("[z1, z1*z2]", 2))


def test_mult_table_associative():
    for name, s in regression_sections():
        A = milnor_algebra(s)
        if A.mu > 16:
            continue
        basis = [tuple(1 if i == j else 0 for i in range(A.mu)) for j in range(A.mu)]
        for a, b, c in itertools.product(basis, repeat=3):
            assert A.multiply(A.multiply(a, b), c) == A.multiply(a, A.multiply(b, c)), name


def test_homology_unit_section():
    t = koszul_homology_graded(section("[z1, z2]", 2))
    assert sum(t.dim(0, d) for d in range(*t.degree_range)) + t.dim(0, t.degree_range[1]) == 1
    assert t.vanishes_off_zero()
    assert euler_characteristic(t) == 1


def test_homology_fermat():
    t = koszul_homology_graded(section("[3*z1^2, 3*z2^2]", 2))
    assert t.dim(0) == 4
    assert t.dim(-1) == 0 and t.dim(-2) == 0
    assert euler_characteristic(t) == 4


def test_homology_non_regular():
    t = koszul_homology_graded(section("[z1, z1*z2]", 2))
    assert not t.vanishes_off_zero()
    assert any(t.dim(-1, d) for d in range(t.degree_range[0], t.degree_range[1] + 1))
    assert euler_characteristic(t) == sum((-1) ** k * dim for (k, d), dim in t.dims.items())


def test_not_quasi_homogeneous():
    with pytest.raises(NotQuasiHomogeneous):
        koszul_homology_graded(section("[z1 + z1^2, z2]", 2))


@pytest.mark.parametrize("label,s", regression_sections())
def test_homology_matches_hilbert_series(label, s):
    """Graded H^0 against the closed-form Hilbert series of a regular sequence."""
    t = koszul_homology_graded(s)
    lo, hi = t.degree_range
    hs = hilbert_series(t.weights, t.section_degrees, hi)
    assert t.vanishes_off_zero(), label
    for d in range(lo, hi + 1):
        assert t.dim(0, d) == hs[d], (label, d)
    assert euler_characteristic(t) == milnor_algebra(s).mu


def test_differential_squares_to_zero_and_preserves_degree():
    s = gradient_section("z1^3 + z2^4", 2)
    w = s.find_weights()
    degs = s.degrees(w)
    for D in range(0, sum(degs) + 1):
        # building the matrix raises if the degree is not preserved
        _src2, mid, d2 = koszul_differential_matrix(s, w, degs, 2, D)
        mid1, _tgt, d1 = koszul_differential_matrix(s, w, degs, 1, D)
        assert mid == mid1
        for row in d2:
            for j in range(len(d1[0]) if d1 else 0):
                assert sum((row[k] * d1[k][j] for k in range(len(mid))), GaussianRational(0)) == 0
