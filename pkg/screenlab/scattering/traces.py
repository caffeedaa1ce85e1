"""
Boundary traces on r = 1 evaluated pointwise

These feed collocation residuals for the screen, auxiliary and Steklov
boundary conditions. They only sum modes at points and never touch the
per-degree linear algebra of the solvers.
"""

from typing import Tuple

import numpy as np

from ..specfun import mode_arrays, riccati_table, vsh_basis


def boundary_traces(kappa: float, n_max: int, coeff_M: np.ndarray, coeff_N: np.ndarray,
                    kind: str, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    E_T and ν×curl E on the unit sphere for a mode expansion

    Args:
        kappa: Wave number
        n_max: Truncation degree of the coefficient arrays
        coeff_M: TE (M-mode) coefficients
        coeff_N: TM (N-mode) coefficients
        kind: 'j' for regular, 'h' for radiating radial factors
        directions: Boundary points, shape (P, 3)

    Returns:
        (E_T, ν×curl E), each (P, 3)
    """
    basis = vsh_basis(n_max, directions)
    values, riccati = riccati_table(n_max, kappa, kind)
    degrees, _ = mode_arrays(n_max)
    z = values[degrees]
    zeta = riccati[degrees]
    X = basis.X
    U = basis.U
    e_t = (np.einsum('k,pkc->pc', coeff_M * z, X)
           - np.einsum('k,pkc->pc', coeff_N * zeta, U))
    rotated_curl = (-kappa * np.einsum('k,pkc->pc', coeff_M * zeta, X)
                    - kappa * np.einsum('k,pkc->pc', coeff_N * z, U))
    return e_t, rotated_curl


def curl_type_part(kappa: float, n_max: int, coeff_M: np.ndarray, kind: str,
                   directions: np.ndarray) -> np.ndarray:
    """The X-component of E_T, i.e. S E_T for a mode expansion"""
    basis = vsh_basis(n_max, directions)
    values, _ = riccati_table(n_max, kappa, kind)
    degrees, _ = mode_arrays(n_max)
    return np.einsum('k,pkc->pc', coeff_M * values[degrees], basis.X)


def relative_residual(residual: np.ndarray, *terms: np.ndarray) -> float:
    """max |residual| over max |term|, both pointwise Euclidean norms"""
    scale = max(float(np.max(np.linalg.norm(t, axis=-1))) for t in terms)
    peak = float(np.max(np.linalg.norm(residual, axis=-1)))
    return peak / scale if scale > 0 else peak


def screen_residual(expansion, sigma, directions: np.ndarray) -> float:
    """
    Relative collocation residual of the screen transmission conditions

    E⁺_T - E⁻_T and ν×(curl E⁺ - curl E⁻) - iκ Σ E⁺_T at the given points.
    """
    k, n = expansion.kappa, expansion.n_max
    inc_t, inc_curl = boundary_traces(k, n, expansion.incident_M, expansion.incident_N, 'j', directions)
    sca_t, sca_curl = boundary_traces(k, n, expansion.scattered_M, expansion.scattered_N, 'h', directions)
    int_t, int_curl = boundary_traces(k, n, expansion.interior_M, expansion.interior_N, 'j', directions)
    outer_t = inc_t + sca_t
    outer_curl = inc_curl + sca_curl
    continuity = outer_t - int_t
    jump = outer_curl - int_curl - 1j * k * sigma.apply(outer_t, directions)
    return max(relative_residual(continuity, outer_t, int_t),
               relative_residual(jump, outer_curl, int_curl, k * outer_t))
