"""
Surface tensors and admissibility
"""

import numpy as np
import pytest

from screenlab.tensor import (
    GeneralTensor2,
    SurfaceTensor,
    check_existence,
    check_uniqueness,
    existence_matrix,
    quadratic_form,
    transpose,
    uniqueness_failures,
)


def test_purely_imaginary_scalar_is_admissible():
    report = check_existence(SurfaceTensor(a=0.5j))
    assert report.uniqueness_ok
    assert report.existence_ok
    assert report.admissible
    assert report.theta_star == pytest.approx(np.pi / 2)
    assert report.gamma_star == pytest.approx(0.5)


def test_identity_is_admissible_at_theta_zero():
    report = check_existence(SurfaceTensor(a=1.0))
    assert report.admissible
    assert report.theta_star == pytest.approx(0.0)
    assert report.gamma_star == pytest.approx(1.0)


def test_existence_scan_stops_at_a_right_angle():
    # on [0, π] the optimum of -0.1 cos θ + sin θ would sit past π/2
    report = check_existence(SurfaceTensor(a=-0.1 + 1j))
    assert not report.uniqueness_ok
    assert report.existence_ok
    assert report.theta_star == pytest.approx(np.pi / 2)
    assert report.gamma_star == pytest.approx(1.0)


def test_indefinite_imaginary_part_fails_existence():
    report = check_existence(GeneralTensor2(1j, 0.0, 0.0, -1j))
    assert report.uniqueness_ok
    assert not report.existence_ok
    assert not report.admissible
    assert report.theta_star is None


def test_large_off_diagonal_fails_uniqueness():
    t = GeneralTensor2.from_matrix([[0.1, 1.0], [1.0, 0.1]])
    assert uniqueness_failures(t) == ['off_diagonal']
    assert not check_uniqueness(t)


def test_negative_real_part_is_named():
    assert 're_sigma11' in uniqueness_failures(GeneralTensor2(-1.0, 0.0, 0.0, 1.0))
    assert 're_sigma22' in uniqueness_failures(GeneralTensor2(1.0, 0.0, 0.0, -1.0))


def test_rotation_part_does_not_break_uniqueness():
    # J is skew-symmetric, so its Hermitian contribution vanishes for real b
    assert check_uniqueness(SurfaceTensor(a=0.2, b=3.0))


def test_surface_tensor_matrix_and_transpose():
    t = SurfaceTensor(a=0.3j, b=0.1)
    np.testing.assert_array_equal(t.matrix, np.array([[0.3j, -0.1], [0.1, 0.3j]]))
    tt = transpose(t)
    assert tt == SurfaceTensor(a=0.3j, b=-0.1)
    np.testing.assert_array_equal(tt.matrix, t.matrix.T)
    g = t.to_general()
    np.testing.assert_array_equal(transpose(g).matrix, g.matrix.T)


def test_apply_matches_frame_matrix(rng):
    t = SurfaceTensor(a=0.4 + 0.2j, b=-0.3 + 0.1j)
    normal = np.array([[0.0, 0.0, 1.0]])
    t1, t2 = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    alpha, beta = rng.normal(size=2) + 1j * rng.normal(size=2)
    field = (alpha * t1 + beta * t2)[None, :]
    out = t.apply(field, normal)[0]
    expected = t.matrix @ np.array([alpha, beta])
    np.testing.assert_allclose([out @ t1, out @ t2], expected, atol=1e-15)
    assert out[2] == 0


def test_quadratic_form():
    t = SurfaceTensor(a=0.7 - 0.2j, b=0.5j)
    assert quadratic_form(t, (1.0, 1j)) == pytest.approx(2 * t.a - 2j * t.b)
    assert quadratic_form(t, (1.0, 0.0)) == pytest.approx(t.a)


def test_existence_matrix_is_hermitian():
    t = GeneralTensor2(0.2 + 1j, 0.3, -0.1j, 0.5 + 0.4j)
    for theta in (0.0, 0.4, np.pi / 2):
        m = existence_matrix(t, theta)
        np.testing.assert_allclose(m, m.conj().T, atol=1e-15)


def test_dict_round_trip():
    t = SurfaceTensor(a=0.25 + 0.5j, b=-0.125j)
    assert SurfaceTensor.from_dict(t.to_dict()) == t


def test_non_finite_entries_rejected():
    with pytest.raises(ValueError):
        SurfaceTensor(a=np.nan)
    with pytest.raises(ValueError):
        GeneralTensor2(1.0, np.inf, 0.0, 1.0)


def test_report_dict():
    d = check_existence(SurfaceTensor(a=0.5j)).to_dict()
    assert set(d) == {'uniqueness_ok', 'existence_ok', 'theta_star', 'gamma_star', 'uniqueness_failures'}
    assert d['uniqueness_failures'] == []
