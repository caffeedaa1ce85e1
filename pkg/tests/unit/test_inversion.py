"""
Dipole right-hand sides, Tikhonov solves, indicator sweeps and peak detection
"""

import logging

import numpy as np
import pytest

from screenlab.errors import DomainError
from screenlab.farfield import LambdaCache, assemble_F, build_grid
from screenlab.inversion import (
    IndicatorCurve,
    ProbeSet,
    RegularizationPolicy,
    TikhonovFactorization,
    detect_peaks,
    dipole_far_field,
    dipole_rhs,
    lambda_grid,
    morozov_alpha,
    sample_probes,
    scan_indicator,
    tikhonov_solve,
)
from screenlab.specfun import riccati_table
from screenlab.tensor import SurfaceTensor
from tests.helpers import random_unit


def _complex_matrix(rng, rows, cols):
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


@pytest.fixture(scope='module')
def small_F():
    return assemble_F(SurfaceTensor(a=0.5j), 1.9, build_grid(24), n_max=6)


def test_dipole_far_field_closed_form(kappa):
    e = dipole_far_field(np.array([0.0, 0.0, 1.0]), np.zeros(3), np.array([1.0, 0.0, 0.0]), kappa)
    np.testing.assert_allclose(e, [1j * kappa / (4 * np.pi), 0.0, 0.0], atol=1e-15)
    parallel = dipole_far_field(np.array([0.0, 0.0, 1.0]), np.zeros(3), np.array([0.0, 0.0, 1.0]), kappa)
    np.testing.assert_array_equal(parallel, np.zeros(3))


def test_dipole_far_field_is_tangential_with_shifted_phase(kappa, rng):
    x = random_unit(rng, 12)
    z = np.array([0.1, -0.2, 0.3])
    q = np.array([0.0, 1.0, 0.0])
    e = dipole_far_field(x, z, q, kappa)
    np.testing.assert_allclose(np.einsum('pc,pc->p', e, x), 0.0, atol=1e-15)
    centered = dipole_far_field(x, np.zeros(3), q, kappa)
    np.testing.assert_allclose(e, centered * np.exp(-1j * kappa * (x @ z))[:, None], rtol=1e-14)
    sin_angle = np.linalg.norm(np.cross(x, q), axis=1)
    np.testing.assert_allclose(np.linalg.norm(e, axis=1), kappa / (4 * np.pi) * sin_angle, rtol=1e-13)


def test_dipole_rows_are_point_major(kappa, grid24):
    probes = sample_probes(2, 0.5, seed=3)
    rhs = dipole_rhs(grid24.receivers, probes, kappa)
    assert rhs.shape == (6, 48)
    receivers = grid24.receivers
    values = dipole_far_field(receivers.nodes, probes.points[1], np.array([0.0, 0.0, 1.0]), kappa)
    expected = np.repeat(np.sqrt(receivers.weights), 2) * receivers.cartesian_to_frame(values)
    np.testing.assert_allclose(rhs[5], expected, rtol=1e-14)


def test_sampling_points_in_the_ball(rng):
    probes = sample_probes(15, 0.9, seed=11)
    assert len(probes) == 15
    assert np.all(np.linalg.norm(probes.points, axis=1) <= 0.9)
    np.testing.assert_array_equal(sample_probes(15, 0.9, seed=11).points, probes.points)
    assert not np.array_equal(sample_probes(15, 0.9, seed=12).points, probes.points)
    with pytest.raises(DomainError):
        sample_probes(3, 1.2)
    with pytest.raises(DomainError):
        ProbeSet(points=np.array([[0.0, 0.0, 0.95]]), r_max=0.9, seed=0)


def test_tikhonov_on_the_identity(rng):
    b = rng.normal(size=5) + 1j * rng.normal(size=5)
    g, residual = tikhonov_solve(np.eye(5), b, 0.5)
    np.testing.assert_allclose(g, b / 1.5, rtol=1e-14)
    assert residual == pytest.approx(np.linalg.norm(b / 1.5 - b), rel=1e-12)


def test_tikhonov_matches_normal_equations(rng):
    M = _complex_matrix(rng, 40, 40)
    b = rng.normal(size=40) + 1j * rng.normal(size=40)
    alpha = 1e-3
    g, _ = tikhonov_solve(M, b, alpha)
    reference = np.linalg.solve(M.conj().T @ M + alpha * np.eye(40), M.conj().T @ b)
    np.testing.assert_allclose(g, reference, rtol=1e-8, atol=1e-10)


def test_tikhonov_monotone_in_alpha(rng):
    M = _complex_matrix(rng, 30, 30)
    b = rng.normal(size=30) + 1j * rng.normal(size=30)
    factorization = TikhonovFactorization(M)
    norms, residuals = [], []
    for alpha in np.logspace(-8, -2, 7) * factorization.sigma_max ** 2:
        g, residual = factorization.solve(b, alpha)
        norms.append(np.linalg.norm(g))
        residuals.append(residual)
    assert np.all(np.diff(norms) < 0)
    assert np.all(np.diff(residuals) > 0)


def test_stacked_right_hand_sides(rng):
    M = _complex_matrix(rng, 12, 10)
    rows = _complex_matrix(rng, 4, 12)
    factorization = TikhonovFactorization(M)
    g, residual = factorization.solve(rows, 1e-2)
    assert g.shape == (4, 10)
    for i in range(4):
        gi, ri = factorization.solve(rows[i], 1e-2)
        np.testing.assert_allclose(g[i], gi, rtol=1e-12)
        assert residual[i] == pytest.approx(ri, rel=1e-12)
    with pytest.raises(ValueError):
        factorization.solve(rows[0], 0.0)


def test_morozov_meets_the_discrepancy(rng):
    M = _complex_matrix(rng, 40, 40)
    b_clean = M @ (rng.normal(size=40) + 1j * rng.normal(size=40))
    e = rng.normal(size=40) + 1j * rng.normal(size=40)
    delta = 0.01
    b = b_clean + e * delta * np.linalg.norm(b_clean) / np.linalg.norm(e)
    factorization = TikhonovFactorization(M)
    alpha = morozov_alpha(factorization, b, delta, tau=1.1)
    assert factorization.discrepancy(b, alpha) == pytest.approx(1.1 * delta * np.linalg.norm(b), rel=1e-5)


def test_regularization_policy(caplog):
    with pytest.raises(ValueError):
        RegularizationPolicy(policy='lcurve')
    with pytest.raises(ValueError):
        RegularizationPolicy(rho=0.0)
    factorization = TikhonovFactorization(np.diag([2.0, 1.0]))
    policy = RegularizationPolicy(policy='morozov', noise_level=0.0)
    with caplog.at_level(logging.WARNING):
        alpha = policy.alpha_for(factorization, np.ones(2))
    assert alpha == pytest.approx(1e-10 * 4.0)
    assert 'noise level' in caplog.text


def test_unmodified_sweep_is_constant(small_F):
    probes = sample_probes(3, 0.5, seed=1)
    curve = scan_indicator(small_F, lambda_grid(-0.5, 1.0, 5), probes, modified=False)
    assert not curve.modified
    assert np.all(curve.indicator == curve.indicator[0])
    assert curve.valid.all()


def test_indicator_ignores_point_order(small_F):
    probes = sample_probes(4, 0.6, seed=5)
    lams = lambda_grid(-0.5, 1.0, 4)
    curve = scan_indicator(small_F, lams, probes)
    shuffled = scan_indicator(small_F, lams, probes.reordered([2, 0, 3, 1]))
    np.testing.assert_allclose(shuffled.indicator, curve.indicator, rtol=1e-10)


def test_threads_and_cache_do_not_change_the_curve(small_F, tmp_path):
    probes = sample_probes(2, 0.6, seed=5)
    lams = lambda_grid(-0.5, 1.0, 6)
    reference = scan_indicator(small_F, lams, probes)
    threaded = scan_indicator(small_F, lams, probes, n_jobs=3)
    np.testing.assert_allclose(threaded.indicator, reference.indicator, rtol=1e-12)

    cache = LambdaCache(tmp_path / 'cache')
    cold = scan_indicator(small_F, lams, probes, cache=cache)
    warm = scan_indicator(small_F, lams, probes, cache=cache)
    assert (cache.misses, cache.hits) == (6, 6)
    np.testing.assert_array_equal(warm.indicator, cold.indicator)
    np.testing.assert_allclose(cold.indicator, reference.indicator, rtol=1e-12)


def test_progress_bar_counts_finished_samples(small_F, capsys):
    probes = sample_probes(2, 0.6, seed=5)
    lams = lambda_grid(-0.5, 1.0, 7)
    quiet = scan_indicator(small_F, lams, probes, n_jobs=2)
    capsys.readouterr()
    shown = scan_indicator(small_F, lams, probes, n_jobs=2, progress=True)
    err = capsys.readouterr().err
    assert 'lambda sweep' in err
    assert '7/7' in err
    np.testing.assert_allclose(shown.indicator, quiet.indicator, rtol=1e-12)


def test_unmodified_sweep_solves_every_sample(small_F):
    probes = sample_probes(3, 0.5, seed=1)
    lams = lambda_grid(-0.5, 1.0, 5)
    curve = scan_indicator(small_F, lams, probes, modified=False)
    assert np.all(np.isfinite(curve.alphas))
    assert np.all(np.isfinite(curve.residual_mean))
    assert np.all(curve.residual_mean == curve.residual_mean[0])
    assert len(detect_peaks(curve)) == 0


def test_pole_samples_are_marked_invalid(small_F):
    h, zh = riccati_table(1, small_F.kappa, 'h')
    pole = -small_F.kappa * zh[1] / h[1]
    lams = np.array([-0.2, pole, 0.4], dtype=complex)
    curve = scan_indicator(small_F, lams, sample_probes(2, 0.5, seed=2))
    np.testing.assert_array_equal(curve.valid, [True, False, True])
    assert np.isnan(curve.indicator[1])
    assert 1 in curve.errors
    assert curve.n_invalid == 1


def test_morozov_without_noise_falls_back_to_fixed(small_F, caplog):
    probes = sample_probes(2, 0.5, seed=2)
    lams = lambda_grid(0.0, 0.5, 3)
    with caplog.at_level(logging.WARNING):
        curve = scan_indicator(small_F, lams, probes, policy=RegularizationPolicy('morozov'))
    fixed = scan_indicator(small_F, lams, probes)
    np.testing.assert_array_equal(curve.indicator, fixed.indicator)
    assert caplog.text.count('Morozov policy needs a noise level') == 1


def _curve(values, lams=None, valid=None):
    values = np.asarray(values, dtype=float)
    lams = np.linspace(-1.0, 1.0, len(values)) if lams is None else lams
    valid = np.ones(len(values), dtype=bool) if valid is None else valid
    return IndicatorCurve(lams=lams.astype(complex), indicator=values, residual_mean=np.zeros(len(values)),
                          valid=valid, alphas=np.full(len(values), 1e-6))


def test_three_bumps_give_three_peaks():
    lams = np.linspace(-1.0, 1.0, 401)
    centers = (-0.5, 0.1, 0.6)
    values = 1.0 + sum(10.0 * np.exp(-((lams - c) / 0.02) ** 2) for c in centers)
    peaks = detect_peaks(_curve(values, lams))
    assert len(peaks) == 3
    np.testing.assert_allclose(np.real(peaks.locations), centers, atol=0.0051)
    np.testing.assert_allclose(peaks.prominences, 10.0, rtol=1e-3)
    np.testing.assert_allclose(peaks.widths, 2 * 0.02 * np.sqrt(np.log(2)), atol=0.006)


def test_monotone_curve_has_no_peaks():
    assert len(detect_peaks(_curve(np.linspace(1.0, 5.0, 50)))) == 0


def test_invalid_samples_are_interpolated():
    lams = np.linspace(-1.0, 1.0, 201)
    values = 1.0 + 10.0 * np.exp(-(lams / 0.05) ** 2)
    valid = np.ones(201, dtype=bool)
    valid[20] = False
    values[20] = np.nan
    peaks = detect_peaks(_curve(values, lams, valid))
    assert len(peaks) == 1
    assert peaks.indices[0] == 100
    assert peaks.interpolated == [20]


def test_too_few_valid_samples():
    valid = np.array([True, False, True, True, False, True])
    assert len(detect_peaks(_curve(np.ones(6), valid=valid))) == 0


def test_curve_csv_round_trip(tmp_path):
    curve = _curve([1.5, np.nan, 2.25], valid=np.array([True, False, True]))
    curve.save_csv(tmp_path / 'indicator.csv')
    text = (tmp_path / 'indicator.csv').read_text()
    assert text.splitlines()[0] == 'lambda_re,lambda_im,indicator,residual_mean,valid'
    loaded = IndicatorCurve.from_csv(tmp_path / 'indicator.csv')
    np.testing.assert_array_equal(loaded.valid, curve.valid)
    np.testing.assert_array_equal(loaded.lams, curve.lams)
    assert loaded.indicator[0] == 1.5 and np.isnan(loaded.indicator[1])


def test_lambda_grid():
    lams = lambda_grid(-0.5, 1.0, 4, im=0.1)
    np.testing.assert_allclose(lams.real, [-0.5, 0.0, 0.5, 1.0])
    assert np.all(lams.imag == 0.1)
    with pytest.raises(ValueError):
        lambda_grid(0.0, 1.0, 1)
