"""
Admissibility checks for surface tensors
Uniqueness: Hermitian part positive semidefinite.
Existence: some θ in [0, π/2] makes cos θ·Re(Σ) + sin θ·Im(Σ) uniformly positive.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .surface_tensor import AnyTensor, as_general

logger = logging.getLogger(__name__)

DEFAULT_THETA_SAMPLES = 181


@dataclass
class AdmissibilityReport:
    """Outcome of the uniqueness and existence checks"""
    uniqueness_ok: bool
    existence_ok: bool
    theta_star: Optional[float] = None
    gamma_star: Optional[float] = None
    uniqueness_failures: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.existence_ok and (self.theta_star is None or self.gamma_star is None):
            raise ValueError("existence_ok requires theta_star and gamma_star")

    @property
    def admissible(self) -> bool:
        return self.uniqueness_ok and self.existence_ok

    def to_dict(self) -> Dict:
        return {
            'uniqueness_ok': self.uniqueness_ok,
            'existence_ok': self.existence_ok,
            'theta_star': self.theta_star,
            'gamma_star': self.gamma_star,
            'uniqueness_failures': list(self.uniqueness_failures),
        }


def uniqueness_failures(t: AnyTensor) -> List[str]:
    """
    Name the passivity inequalities that fail

    Returns a subset of ['re_sigma11', 're_sigma22', 'off_diagonal'] for
    Re σ11 >= 0, Re σ22 >= 0 and Re σ11·Re σ22 >= |σ12 + conj(σ21)|²/4.
    """
    g = as_general(t)
    re11, re22 = complex(g.s11).real, complex(g.s22).real
    coupling = abs(complex(g.s12) + complex(g.s21).conjugate()) ** 2 / 4.0
    failures = []
    if re11 < 0:
        failures.append('re_sigma11')
    if re22 < 0:
        failures.append('re_sigma22')
    if re11 * re22 < coupling:
        failures.append('off_diagonal')
    return failures


def check_uniqueness(t: AnyTensor) -> bool:
    """True iff (Σ + Σ^H)/2 is positive semidefinite"""
    return not uniqueness_failures(t)


def existence_matrix(t: AnyTensor, theta: float) -> np.ndarray:
    """M(θ) = cos θ·(Σ+Σ^H)/2 + sin θ·(Σ-Σ^H)/(2i)"""
    g = as_general(t)
    return np.cos(theta) * g.hermitian_part() + np.sin(theta) * g.skew_part()


def check_existence(t: AnyTensor, theta_samples: int = DEFAULT_THETA_SAMPLES) -> AdmissibilityReport:
    """
    Scan θ over [0, π/2] for uniform positivity of M(θ)

    Args:
        t: Tensor to check
        theta_samples: Number of uniform θ samples (>= 2)

    Returns:
        AdmissibilityReport with the maximizing θ and its smallest eigenvalue
    """
    if theta_samples < 2:
        raise ValueError(f"theta_samples must be >= 2, got {theta_samples}")

    thetas = np.linspace(0.0, np.pi / 2, theta_samples)
    smallest = np.array([np.linalg.eigvalsh(existence_matrix(t, th))[0] for th in thetas])
    best = int(np.argmax(smallest))
    gamma = float(smallest[best])

    failures = uniqueness_failures(t)
    existence_ok = gamma > 0
    report = AdmissibilityReport(
        uniqueness_ok=not failures,
        existence_ok=existence_ok,
        theta_star=float(thetas[best]) if existence_ok else None,
        gamma_star=gamma if existence_ok else None,
        uniqueness_failures=failures,
    )
    logger.debug("Existence scan: theta*=%.6f gamma*=%.6e", thetas[best], gamma)
    return report
