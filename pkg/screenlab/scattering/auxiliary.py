"""
Auxiliary exterior problem with boundary operator λS

On the unit sphere the smoothing operator S = -ν×∇_S Δ_S⁻¹ ∇_S·(ν×·) is the
orthogonal projection onto curl-type fields: for v = X_nm, ∇_S·(ν×X) = n(n+1)Y/c
gives Δ_S⁻¹(...) = -Y/c and S X = X, while ν×U is divergence-free so S U = 0.
The condition ν×curl E - λ S E_T = 0 therefore reads, per mode,
    TE: -κ(p ζj + s ζh) - λ(p j + s h) = 0
    TM: -κ(p j + s h) = 0
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import AuxiliaryPoleError, DomainError
from ..specfun import mode_arrays, riccati_table, vsh_basis
from .mie import Incident, PlaneWave, ScatteredModes, default_truncation, incident_coefficients
from .mie import plane_wave_coefficients
from .traces import boundary_traces, curl_type_part, relative_residual

logger = logging.getLogger(__name__)

POLE_TOLERANCE = 1e-13


@dataclass(frozen=True)
class AuxParameter:
    """Auxiliary parameter λ; uniqueness is guaranteed for Im λ >= 0"""
    lam: complex

    def __post_init__(self):
        if not np.isfinite(complex(self.lam)):
            raise DomainError(f"λ must be finite, got {self.lam}")

    @property
    def flagged(self) -> bool:
        return complex(self.lam).imag < 0


@dataclass
class AuxModeSolution(ScatteredModes):
    """Scattered coefficients of the auxiliary problem (exterior only)"""
    lam: complex = 0.0


@dataclass
class TangentialExpansion:
    """Tangential field Σ u_k U_k + x_k X_k on the unit sphere"""
    n_max: int
    u: np.ndarray
    x: np.ndarray

    def evaluate(self, directions: np.ndarray) -> np.ndarray:
        basis = vsh_basis(self.n_max, directions)
        return np.einsum('k,pkc->pc', self.u, basis.U) + np.einsum('k,pkc->pc', self.x, basis.X)

    def inner(self, other: 'TangentialExpansion') -> complex:
        """L² inner product ∫ v·conj(w)"""
        return complex(np.vdot(other.u, self.u) + np.vdot(other.x, self.x))

    def __sub__(self, other: 'TangentialExpansion') -> 'TangentialExpansion':
        return TangentialExpansion(self.n_max, self.u - other.u, self.x - other.x)

    @classmethod
    def from_samples(cls, values: np.ndarray, nodes: np.ndarray, weights: np.ndarray,
                     n_max: int) -> 'TangentialExpansion':
        """Project sampled tangential values onto the basis by quadrature"""
        basis = vsh_basis(n_max, nodes)
        wv = weights[:, None] * values
        u = np.einsum('pkc,pc->k', basis.U.conj(), wv)
        x = np.einsum('pkc,pc->k', basis.X.conj(), wv)
        return cls(n_max, u, x)


def smoothing_operator_s(v: TangentialExpansion) -> TangentialExpansion:
    """Keep curl-type (X) components, annihilate gradient-type (U) components"""
    return TangentialExpansion(v.n_max, np.zeros_like(v.u), v.x.copy())


def _te_factors(lam: complex, kappa: float, j, zj, h, zh):
    numerator = kappa * zj + lam * j
    denominator = kappa * zh + lam * h
    scale = np.abs(kappa * zh) + np.abs(lam) * np.abs(h)
    return numerator, denominator, scale


def solve_aux_mode(n: int, lam: complex, kappa: float, p_M, p_N) -> Tuple[np.ndarray, np.ndarray]:
    """
    Scattered coefficients of one degree for the auxiliary problem

    Args:
        n: Degree >= 1
        lam: Auxiliary parameter
        kappa: Wave number > 0
        p_M: TE incident coefficient(s)
        p_N: TM incident coefficient(s)

    Returns:
        (s_M, s_N); s_N does not depend on λ
    """
    if kappa <= 0:
        raise DomainError(f"Wave number must be > 0, got {kappa}")
    j_tab, zj_tab = riccati_table(n, kappa, 'j')
    h_tab, zh_tab = riccati_table(n, kappa, 'h')
    numerator, denominator, scale = _te_factors(lam, kappa, j_tab[n], zj_tab[n], h_tab[n], zh_tab[n])
    if abs(denominator) < POLE_TOLERANCE * scale:
        raise AuxiliaryPoleError(n, lam)
    p_M = np.asarray(p_M, dtype=complex)
    p_N = np.asarray(p_N, dtype=complex)
    return -p_M * numerator / denominator, -p_N * j_tab[n] / h_tab[n]


def aux_transition(lam: complex, kappa: float, n_max: int) -> np.ndarray:
    """
    Per-degree 2x2 maps from incident to scattered coefficients

    Returns:
        Array (n_max+1, 2, 2), diagonal in (TE, TM); row 0 unused
    """
    j_tab, zj_tab = riccati_table(n_max, kappa, 'j')
    h_tab, zh_tab = riccati_table(n_max, kappa, 'h')
    out = np.zeros((n_max + 1, 2, 2), dtype=complex)
    for n in range(1, n_max + 1):
        numerator, denominator, scale = _te_factors(lam, kappa, j_tab[n], zj_tab[n], h_tab[n], zh_tab[n])
        if abs(denominator) < POLE_TOLERANCE * scale:
            raise AuxiliaryPoleError(n, lam)
        out[n, 0, 0] = -numerator / denominator
        out[n, 1, 1] = -j_tab[n] / h_tab[n]
    return out


def solve_aux(wave: Incident, lam: complex, kappa: Optional[float] = None,
              n_max: Optional[int] = None) -> AuxModeSolution:
    """
    Solve the auxiliary problem for a plane wave or Herglotz density

    The surface tensor plays no part here.
    """
    kappa = kappa or wave.kappa
    n_max = n_max or default_truncation(kappa)
    if AuxParameter(lam).flagged:
        logger.warning("Auxiliary parameter lambda=%s has Im < 0; uniqueness is not guaranteed", lam)

    if isinstance(wave, PlaneWave):
        p_M, p_N = plane_wave_coefficients(wave, n_max)
    else:
        p_M, p_N = incident_coefficients(wave, n_max)

    blocks = aux_transition(lam, kappa, n_max)
    degrees, _ = mode_arrays(n_max)
    s_M = blocks[degrees, 0, 0] * p_M
    s_N = blocks[degrees, 1, 1] * p_N
    return AuxModeSolution(kappa=kappa, n_max=n_max, scattered_M=s_M, scattered_N=s_N, lam=lam)


def aux_residual(solution: AuxModeSolution, p_M: np.ndarray, p_N: np.ndarray,
                 directions: np.ndarray) -> float:
    """Relative collocation residual of ν×curl E - λ S E_T on r = 1"""
    k, n = solution.kappa, solution.n_max
    inc_t, inc_curl = boundary_traces(k, n, p_M, p_N, 'j', directions)
    sca_t, sca_curl = boundary_traces(k, n, solution.scattered_M, solution.scattered_N, 'h', directions)
    projected = (curl_type_part(k, n, p_M, 'j', directions)
                 + curl_type_part(k, n, solution.scattered_M, 'h', directions))
    curl_total = inc_curl + sca_curl
    residual = curl_total - solution.lam * projected
    return relative_residual(residual, curl_total, inc_curl, k * (inc_t + sca_t))
