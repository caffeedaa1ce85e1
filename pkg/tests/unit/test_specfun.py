"""
Spherical Bessel tables, Legendre functions and vector spherical harmonics
"""

import numpy as np
import pytest
from scipy import special

from screenlab.errors import DomainError
from screenlab.farfield import product_gauss_grid
from screenlab.specfun import (
    ModeKey,
    mode_count,
    mode_index,
    mode_keys,
    radial_pair,
    riccati_table,
    sph_bessel_j,
    sph_hankel1,
    spherical_jn_table,
    spherical_yn_table,
    tangential_frames,
    vsh_basis,
    vsh_eval,
)
from screenlab.specfun.legendre import legendre_table

ARGUMENTS = [0.5, 1.9, 7.3, 25.0]


@pytest.mark.parametrize('x', ARGUMENTS)
def test_jn_table_matches_scipy(x):
    orders = np.arange(21)
    np.testing.assert_allclose(spherical_jn_table(20, x), special.spherical_jn(orders, x),
                               rtol=1e-10, atol=1e-15)


@pytest.mark.parametrize('x', ARGUMENTS)
def test_yn_table_matches_scipy(x):
    orders = np.arange(21)
    np.testing.assert_allclose(spherical_yn_table(20, x), special.spherical_yn(orders, x),
                               rtol=1e-10, atol=1e-14)


def test_small_argument_high_order_keeps_relative_accuracy():
    table = spherical_jn_table(15, 0.1)
    expected = special.spherical_jn(np.arange(16), 0.1)
    np.testing.assert_allclose(table, expected, rtol=1e-10)


@pytest.mark.parametrize('x', [0.8, 1.9, 6.0])
def test_riccati_terms(x):
    orders = np.arange(11)
    values, riccati = riccati_table(10, x, 'j')
    expected = special.spherical_jn(orders, x) / x + special.spherical_jn(orders, x, derivative=True)
    np.testing.assert_allclose(riccati, expected, rtol=1e-10, atol=1e-15)

    values, riccati = riccati_table(10, x, 'h')
    y = special.spherical_yn(orders, x)
    dy = special.spherical_yn(orders, x, derivative=True)
    np.testing.assert_allclose(values.imag, y, rtol=1e-10)
    np.testing.assert_allclose(riccati.imag, y / x + dy, rtol=1e-10, atol=1e-14)


@pytest.mark.parametrize('x', [0.7, 1.9, 11.0])
def test_wronskian(x):
    j = spherical_jn_table(13, x)
    y = spherical_yn_table(13, x)
    # j_n y_{n+1} - j_{n+1} y_n = -1/x²
    w = j[:-1] * y[1:] - j[1:] * y[:-1]
    np.testing.assert_allclose(w * x * x, -np.ones(13), rtol=1e-11)


@pytest.mark.parametrize('n', [0, 1, 5, 12])
def test_scalar_bessel_matches_scipy(n):
    assert sph_bessel_j(n, 1.9) == pytest.approx(special.spherical_jn(n, 1.9), rel=1e-10)
    assert sph_hankel1(n, 1.9).imag == pytest.approx(special.spherical_yn(n, 1.9), rel=1e-10)


def test_radial_pair_and_hankel():
    pair = radial_pair(3, 1.9, 'h')
    assert pair.value == pytest.approx(sph_hankel1(3, 1.9), rel=1e-14)
    assert pair.value.real == pytest.approx(special.spherical_jn(3, 1.9), rel=1e-10)


@pytest.mark.parametrize('x', [0.0, -1.0, np.inf, np.nan])
def test_invalid_arguments_raise(x):
    with pytest.raises(DomainError):
        spherical_jn_table(3, x)
    with pytest.raises(DomainError):
        spherical_yn_table(3, x)


def test_negative_order_raises():
    with pytest.raises(DomainError):
        spherical_jn_table(-1, 1.0)


def test_mode_ordering():
    assert mode_index(1, -1) == 0
    assert mode_index(2, -2) == 3
    assert mode_count(3) == 15
    keys = mode_keys(3)
    assert [k.index for k in keys] == list(range(15))
    with pytest.raises(DomainError):
        ModeKey(2, 3)
    with pytest.raises(DomainError):
        ModeKey(0, 0)


def test_frames_are_orthonormal_and_right_handed(rng):
    d = rng.normal(size=(40, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    d[0] = [0.0, 0.0, 1.0]
    d[1] = [0.0, 0.0, -1.0]
    t1, t2 = tangential_frames(d)
    np.testing.assert_allclose(np.einsum('pc,pc->p', t1, t2), 0.0, atol=1e-15)
    np.testing.assert_allclose(np.linalg.norm(t1, axis=1), 1.0, rtol=1e-15)
    np.testing.assert_allclose(np.linalg.norm(t2, axis=1), 1.0, rtol=1e-15)
    np.testing.assert_allclose(np.cross(t1, t2), d, atol=1e-15)


def test_non_unit_directions_rejected():
    with pytest.raises(DomainError):
        vsh_basis(2, np.array([[0.0, 0.0, 1.1]]))


def test_low_degree_closed_forms():
    theta, phi = 0.7, 1.3
    d = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    theta_hat = np.array([np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi), -np.sin(theta)])

    Y10, U10, _ = vsh_eval(1, 0, d)
    assert Y10 == pytest.approx(np.sqrt(3 / (4 * np.pi)) * np.cos(theta), abs=1e-15)
    np.testing.assert_allclose(U10, -np.sqrt(3 / (8 * np.pi)) * np.sin(theta) * theta_hat, atol=1e-15)

    Y11, _, _ = vsh_eval(1, 1, d)
    assert Y11 == pytest.approx(-np.sqrt(3 / (8 * np.pi)) * np.sin(theta) * np.exp(1j * phi), abs=1e-15)


@pytest.mark.parametrize('n, m', [(1, 1), (2, 1), (3, 2), (4, 3), (5, 0)])
def test_condon_shortley_phase_sits_in_the_harmonics(n, m):
    theta, phi = 1.1, -0.4
    d = np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    table = legendre_table(n, np.array([np.cos(theta)]), np.array([np.sin(theta)]))
    assert table.p[n, m, 0] > 0

    # scipy's lpmv carries the (-1)^m factor
    norm = np.sqrt((2 * n + 1) / (4 * np.pi) * special.factorial(n - m) / special.factorial(n + m))
    expected = norm * special.lpmv(m, n, np.cos(theta)) * np.exp(1j * m * phi)
    Y, _, _ = vsh_eval(n, m, d)
    assert Y == pytest.approx(expected, rel=1e-12)
    assert vsh_eval(n, -m, d)[0] == pytest.approx((-1) ** m * np.conj(expected), rel=1e-12)


def test_negative_orders_are_conjugate():
    d = np.array([0.48, -0.6, 0.64])
    for n, m in [(1, 1), (2, 1), (3, 2), (4, 3)]:
        Yp, Up, Xp = vsh_eval(n, m, d)
        Ym, Um, Xm = vsh_eval(n, -m, d)
        sign = (-1) ** m
        assert Ym == pytest.approx(sign * np.conj(Yp), abs=1e-14)
        np.testing.assert_allclose(Um, sign * np.conj(Up), atol=1e-14)
        np.testing.assert_allclose(Xm, sign * np.conj(Xp), atol=1e-14)


def test_vsh_orthonormal_on_product_grid():
    grid = product_gauss_grid(12, 26)
    basis = vsh_basis(5, grid.nodes)
    w = grid.weights
    K = mode_count(5)

    gram_Y = np.einsum('p,pk,pl->kl', w, basis.Y.conj(), basis.Y)
    gram_U = np.einsum('p,pkc,plc->kl', w, basis.U.conj(), basis.U)
    gram_X = np.einsum('p,pkc,plc->kl', w, basis.X.conj(), basis.X)
    cross = np.einsum('p,pkc,plc->kl', w, basis.U.conj(), basis.X)

    np.testing.assert_allclose(gram_Y, np.eye(K), atol=1e-12)
    np.testing.assert_allclose(gram_U, np.eye(K), atol=1e-12)
    np.testing.assert_allclose(gram_X, np.eye(K), atol=1e-12)
    np.testing.assert_allclose(cross, 0.0, atol=1e-12)


def test_vsh_fields_are_tangential():
    grid = product_gauss_grid(6, 10)
    basis = vsh_basis(4, grid.nodes)
    np.testing.assert_allclose(np.einsum('pkc,pc->pk', basis.U, grid.nodes), 0.0, atol=1e-14)
    np.testing.assert_allclose(np.einsum('pkc,pc->pk', basis.X, grid.nodes), 0.0, atol=1e-14)
    np.testing.assert_allclose(basis.X, np.cross(grid.nodes[:, None, :], basis.U), atol=1e-14)
