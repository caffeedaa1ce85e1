"""
Measurement noise for far-field data
"""

import logging
from dataclasses import dataclass

import numpy as np

from .operators import FarFieldMatrix

logger = logging.getLogger(__name__)

DISTRIBUTIONS = ('unit-square', 'centered')


@dataclass(frozen=True)
class NoiseSpec:
    """
    Relative spectral-norm noise level and seed

    'unit-square' draws re and im i.i.d. from U[0, 1); 'centered' from U[-1, 1).
    """
    level: float
    seed: int = 0
    distribution: str = 'unit-square'

    def __post_init__(self):
        if not 0.0 <= self.level < 1.0:
            raise ValueError(f"Noise level must lie in [0, 1), got {self.level}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"Unknown noise distribution: {self.distribution}")

    def to_dict(self):
        return {'level': self.level, 'seed': self.seed, 'distribution': self.distribution}


def noise_matrix(shape, spec: NoiseSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    real = rng.random(shape)
    imag = rng.random(shape)
    if spec.distribution == 'centered':
        real, imag = 2.0 * real - 1.0, 2.0 * imag - 1.0
    return real + 1j * imag


def add_noise(M: FarFieldMatrix, spec: NoiseSpec) -> FarFieldMatrix:
    """
    Perturb M so that ‖E‖₂ / ‖M‖₂ equals spec.level

    Args:
        M: Far-field matrix (measured data, never F^(λ))
        spec: Noise level, seed and distribution

    Returns:
        New FarFieldMatrix; entries unchanged when the level is 0
    """
    noisy_meta = {'noise': spec.to_dict()}
    if spec.level == 0.0:
        out = M.with_entries(M.entries.copy())
        out.metadata.update(noisy_meta)
        return out

    scale = M.norm()
    if scale == 0.0:
        logger.warning("Zero far-field matrix; relative noise leaves it unchanged")
        out = M.with_entries(M.entries.copy())
        out.metadata.update(noisy_meta)
        return out

    E = noise_matrix(M.shape, spec)
    E *= spec.level * scale / np.linalg.norm(E, 2)
    out = M.with_entries(M.entries + E)
    out.metadata.update(noisy_meta)
    logger.info("Added %.4g%% noise (seed %d)", 100.0 * spec.level, spec.seed)
    return out


def relative_error(noisy: FarFieldMatrix, clean: FarFieldMatrix) -> float:
    return float(np.linalg.norm(noisy.entries - clean.entries, 2) / clean.norm())
