"""
Tikhonov regularization through the singular value decomposition

g_α = V diag(s / (s² + α)) Uᴴ b minimizes ‖Mg - b‖² + α‖g‖².
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple, Union

import numpy as np
from scipy import linalg, optimize

from ..farfield.operators import FarFieldMatrix

logger = logging.getLogger(__name__)

POLICIES = ('fixed', 'morozov')

# Search bracket for Morozov, relative to σ_max²
MOROZOV_LOW = 1e-16
MOROZOV_HIGH = 1e2


class TikhonovFactorization:
    """SVD of one matrix, reused for every right-hand side and α"""

    def __init__(self, matrix: Union[np.ndarray, FarFieldMatrix]):
        entries = matrix.entries if isinstance(matrix, FarFieldMatrix) else np.asarray(matrix)
        self.matrix = entries
        self.u, self.s, self.vh = linalg.svd(entries, full_matrices=False)

    @property
    def sigma_max(self) -> float:
        return float(self.s[0]) if len(self.s) else 0.0

    def solve(self, rhs: np.ndarray, alpha: float) -> Tuple[np.ndarray, float]:
        """
        Regularized solution and its residual ‖Mg - rhs‖

        rhs may be a vector or a stack of row vectors.
        """
        if alpha <= 0:
            raise ValueError(f"Regularization parameter must be > 0, got {alpha}")
        rhs = np.asarray(rhs, dtype=complex)
        beta = self.u.conj().T @ rhs.T
        filtered = self.s / (self.s ** 2 + alpha)
        if beta.ndim == 2:
            filtered = filtered[:, None]
        g = self.vh.conj().T @ (filtered * beta)
        residual = np.linalg.norm(self.matrix @ g - rhs.T, axis=0)
        if rhs.ndim == 1:
            return g, float(residual)
        return g.T, residual

    def discrepancy(self, rhs: np.ndarray, alpha: float) -> float:
        return self.solve(rhs, alpha)[1]


def tikhonov_solve(M: Union[np.ndarray, FarFieldMatrix], rhs: np.ndarray,
                   alpha: float) -> Tuple[np.ndarray, float]:
    """
    Solve min ‖Mg - rhs‖² + α‖g‖²

    Args:
        M: Matrix or FarFieldMatrix
        rhs: Right-hand side
        alpha: Regularization parameter > 0

    Returns:
        (g, residual)
    """
    return TikhonovFactorization(M).solve(rhs, alpha)


@dataclass(frozen=True)
class RegularizationPolicy:
    """
    'fixed': α = ρ σ_max².
    'morozov': α with ‖Mg_α - b‖ = τ δ ‖b‖, δ the relative noise level.
    """
    policy: str = 'fixed'
    rho: float = 1e-10
    tau: float = 1.1
    noise_level: float = 0.0

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ValueError(f"Unknown regularization policy: {self.policy}")
        if self.rho <= 0:
            raise ValueError(f"rho must be > 0, got {self.rho}")
        if self.tau < 1:
            raise ValueError(f"tau must be >= 1, got {self.tau}")

    def to_dict(self) -> Dict:
        return {'policy': self.policy, 'rho': self.rho, 'tau': self.tau, 'noise_level': self.noise_level}

    def fixed_alpha(self, factorization: TikhonovFactorization) -> float:
        return self.rho * factorization.sigma_max ** 2

    def alpha_for(self, factorization: TikhonovFactorization, rhs: np.ndarray) -> float:
        if self.policy == 'fixed' or factorization.sigma_max == 0:
            return self.fixed_alpha(factorization)
        if self.noise_level == 0:
            logger.warning("Morozov policy needs a noise level > 0; using the fixed policy")
            return self.fixed_alpha(factorization)
        return morozov_alpha(factorization, rhs, self.noise_level, self.tau)


def morozov_alpha(factorization: TikhonovFactorization, rhs: np.ndarray, noise_level: float,
                  tau: float = 1.1) -> float:
    """α solving ‖Mg_α - b‖ = τ δ ‖b‖, found by brentq on log α"""
    target = tau * noise_level * np.linalg.norm(rhs)
    scale = factorization.sigma_max ** 2
    lo, hi = np.log(MOROZOV_LOW * scale), np.log(MOROZOV_HIGH * scale)

    def gap(log_alpha):
        return factorization.discrepancy(rhs, np.exp(log_alpha)) - target

    if gap(lo) >= 0:
        logger.warning("Discrepancy exceeds tau*delta*|b| for every alpha; using the smallest")
        return float(np.exp(lo))
    if gap(hi) <= 0:
        return float(np.exp(hi))
    return float(np.exp(optimize.brentq(gap, lo, hi, xtol=1e-8)))
