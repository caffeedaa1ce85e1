"""
Probe points and dipole right-hand sides for the far-field equation
"""

import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..errors import DomainError
from ..farfield.grid import NodeSet
from ..specfun.vsh import check_directions

logger = logging.getLogger(__name__)


@dataclass
class ProbeSet:
    """Sampling points z inside the ball and the three dipole polarizations"""
    points: np.ndarray
    r_max: float
    seed: int
    polarizations: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        radii = np.linalg.norm(self.points, axis=1)
        if np.any(radii > self.r_max + 1e-15):
            raise DomainError(f"Probe points must satisfy |z| <= {self.r_max}")

    def __len__(self) -> int:
        return len(self.points)

    def reordered(self, order) -> 'ProbeSet':
        return ProbeSet(self.points[np.asarray(order)], self.r_max, self.seed, self.polarizations)

    def to_dict(self) -> Dict:
        return {'points': self.points.tolist(), 'r_max': self.r_max, 'seed': self.seed}


def sample_probes(count: int = 15, r_max: float = 0.6, seed: int = 0) -> ProbeSet:
    """
    Uniform points in the ball |z| <= r_max by rejection from the cube

    Args:
        count: Number of points
        r_max: Ball radius, below 1
        seed: Seed for numpy's default generator

    Returns:
        ProbeSet
    """
    if count < 1:
        raise ValueError(f"Probe count must be >= 1, got {count}")
    if not 0 < r_max < 1:
        raise DomainError(f"Probe radius must lie in (0, 1), got {r_max}")
    rng = np.random.default_rng(seed)
    accepted = []
    while len(accepted) < count:
        candidate = rng.uniform(-r_max, r_max, size=3)
        if np.linalg.norm(candidate) <= r_max:
            accepted.append(candidate)
    return ProbeSet(points=np.array(accepted), r_max=r_max, seed=seed)


def dipole_far_field(x_hat, z, q, kappa: float) -> np.ndarray:
    """
    (iκ/4π) (x̂×q)×x̂ e^{-iκ x̂·z}

    Args:
        x_hat: Unit vector (3,) or array (P, 3)
        z: Source point
        q: Dipole moment
        kappa: Wave number

    Returns:
        Tangential complex vectors, shape (3,) or (P, 3)
    """
    single = np.ndim(x_hat) == 1
    x = check_directions(x_hat)
    z = np.asarray(z, dtype=float)
    q = np.asarray(q, dtype=complex)
    amplitude = np.cross(np.cross(x, q[None, :]), x)
    phase = np.exp(-1j * kappa * (x @ z))
    out = (1j * kappa / (4.0 * np.pi)) * amplitude * phase[:, None]
    return out[0] if single else out


def dipole_rhs(receivers: NodeSet, probes: ProbeSet, kappa: float) -> np.ndarray:
    """
    Right-hand sides in the weighted receiver frame, one row per (z, q)

    Rows are ordered probe-major, polarization-minor.
    """
    root_w = np.repeat(np.sqrt(receivers.weights), 2)
    rows = []
    for z in probes.points:
        for q in probes.polarizations:
            values = dipole_far_field(receivers.nodes, z, q, kappa)
            rows.append(root_w * receivers.cartesian_to_frame(values))
    return np.array(rows)
