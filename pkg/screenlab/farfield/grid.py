"""
Direction grids on the unit sphere

Two kinds:
    product-gauss     Gauss-Legendre in cos θ times uniform φ
    spherical-design  Lebedev rules with octahedral symmetry (6 to 50 nodes)
Every node carries the frame t1 = θ̂, t2 = φ̂ from specfun.vsh.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ..errors import UnsupportedGridError
from ..specfun import tangential_frames

logger = logging.getLogger(__name__)

PRODUCT_GAUSS = 'product-gauss'
SPHERICAL_DESIGN = 'spherical-design'

# Lebedev rules: (orbit code, a, weight); weights sum to 1 before the 4π factor
LEBEDEV_RULES = {
    6: (3, [(0, 0.0, 0.1666666666666667)]),
    14: (5, [(0, 0.0, 0.6666666666666667e-1), (2, 0.0, 0.7500000000000000e-1)]),
    26: (7, [(0, 0.0, 0.4761904761904762e-1), (1, 0.0, 0.3809523809523810e-1),
             (2, 0.0, 0.3214285714285714e-1)]),
    38: (9, [(0, 0.0, 0.9523809523809524e-2), (2, 0.0, 0.3214285714285714e-1),
             (4, 0.4597008433809831, 0.2857142857142857e-1)]),
    50: (11, [(0, 0.0, 0.1269841269841270e-1), (1, 0.0, 0.2257495590828924e-1),
              (2, 0.0, 0.2109375000000000e-1), (3, 0.3015113445777636, 0.2017333553791887e-1)]),
}


def _octahedral_orbit(code: int, a: float) -> np.ndarray:
    """
    Points of one octahedral orbit

    code 0: (±1, 0, 0) and permutations      6 points
    code 1: (0, ±a, ±a), a = 1/√2            12 points
    code 2: (±a, ±a, ±a), a = 1/√3           8 points
    code 3: (±a, ±a, ±b), b = √(1 - 2a²)     24 points
    code 4: (±a, ±b, 0), b = √(1 - a²)       24 points
    """
    if code == 0:
        base = [(1.0, 0.0, 0.0)]
    elif code == 1:
        s = np.sqrt(0.5)
        base = [(0.0, s, s)]
    elif code == 2:
        s = np.sqrt(1.0 / 3.0)
        base = [(s, s, s)]
    elif code == 3:
        b = np.sqrt(1.0 - 2.0 * a * a)
        base = [(a, a, b)]
    elif code == 4:
        b = np.sqrt(1.0 - a * a)
        base = [(a, b, 0.0), (b, a, 0.0)]
    else:
        raise ValueError(f"Unknown orbit code: {code}")

    points = set()
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    for point in base:
        for perm in perms:
            permuted = [point[i] for i in perm]
            for sx in (1, -1):
                for sy in (1, -1):
                    for sz in (1, -1):
                        candidate = (sx * permuted[0], sy * permuted[1], sz * permuted[2])
                        points.add(tuple(round(c, 15) + 0.0 for c in candidate))
    return np.array(sorted(points))


@dataclass
class NodeSet:
    """Active nodes of a grid (receivers or transmitters)"""
    nodes: np.ndarray
    weights: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    indices: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)

    def frame_to_cartesian(self, comps: np.ndarray) -> np.ndarray:
        """(P, 2) frame components to (P, 3) vectors"""
        comps = np.asarray(comps).reshape(-1, 2)
        return comps[:, :1] * self.t1 + comps[:, 1:] * self.t2

    def cartesian_to_frame(self, vectors: np.ndarray) -> np.ndarray:
        """(P, 3) vectors to flattened node-major frame components (2P,)"""
        v = np.asarray(vectors)
        comps = np.stack([np.einsum('pc,pc->p', v, self.t1), np.einsum('pc,pc->p', v, self.t2)], axis=1)
        return comps.reshape(-1)


@dataclass
class DirectionGrid:
    """Quadrature nodes with weights, tangential frames and aperture masks"""
    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    degree: int
    shape: Optional[Tuple[int, int]] = None
    obs_aperture: str = 'full'
    inc_aperture: str = 'full'
    obs_mask: np.ndarray = field(default=None)
    inc_mask: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.obs_mask is None:
            self.obs_mask = aperture_mask(self.nodes, self.obs_aperture)
        if self.inc_mask is None:
            self.inc_mask = aperture_mask(self.nodes, self.inc_aperture)

    def __len__(self) -> int:
        return len(self.nodes)

    def _subset(self, mask: np.ndarray) -> NodeSet:
        idx = np.flatnonzero(mask)
        return NodeSet(self.nodes[idx], self.weights[idx], self.t1[idx], self.t2[idx], idx)

    @property
    def receivers(self) -> NodeSet:
        return self._subset(self.obs_mask)

    @property
    def transmitters(self) -> NodeSet:
        return self._subset(self.inc_mask)

    @property
    def full(self) -> NodeSet:
        return self._subset(np.ones(len(self.nodes), dtype=bool))

    @property
    def n_obs(self) -> int:
        return int(np.count_nonzero(self.obs_mask))

    @property
    def n_inc(self) -> int:
        return int(np.count_nonzero(self.inc_mask))

    def with_aperture(self, obs: str = 'full', inc: str = 'full') -> 'DirectionGrid':
        return DirectionGrid(kind=self.kind, nodes=self.nodes, weights=self.weights, t1=self.t1,
                             t2=self.t2, degree=self.degree, shape=self.shape,
                             obs_aperture=obs, inc_aperture=inc)

    def signature(self) -> Dict:
        """Metadata identifying the grid and its masks"""
        return {
            'kind': self.kind,
            'n_nodes': len(self.nodes),
            'shape': list(self.shape) if self.shape else None,
            'degree': self.degree,
            'obs_aperture': self.obs_aperture,
            'inc_aperture': self.inc_aperture,
        }

    def same_as(self, other: 'DirectionGrid') -> bool:
        return (self.signature() == other.signature()
                and np.array_equal(self.nodes, other.nodes)
                and np.array_equal(self.obs_mask, other.obs_mask)
                and np.array_equal(self.inc_mask, other.inc_mask))


def aperture_mask(nodes: np.ndarray, aperture: str) -> np.ndarray:
    """
    Boolean mask of active nodes

    Args:
        nodes: (P, 3) unit vectors
        aperture: 'full', 'upper' (z > 0), 'lower' (z < 0) or 'cap:<deg>'
            (polar angle from +z at most <deg> degrees)
    """
    z = nodes[:, 2]
    if aperture == 'full':
        mask = np.ones(len(nodes), dtype=bool)
    elif aperture == 'upper':
        mask = z > 0
    elif aperture == 'lower':
        mask = z < 0
    elif aperture.startswith('cap:'):
        limit = np.radians(float(aperture.split(':', 1)[1]))
        mask = np.arccos(np.clip(z, -1.0, 1.0)) <= limit + 1e-12
    else:
        raise ValueError(f"Unknown aperture: {aperture}")
    if not mask.any():
        raise UnsupportedGridError(f"Aperture '{aperture}' selects no nodes")
    return mask


def _make_grid(kind: str, nodes: np.ndarray, weights: np.ndarray, degree: int,
               shape=None, obs_aperture: str = 'full', inc_aperture: str = 'full') -> DirectionGrid:
    nodes = nodes / np.linalg.norm(nodes, axis=1)[:, None]
    t1, t2 = tangential_frames(nodes)
    return DirectionGrid(kind=kind, nodes=nodes, weights=weights, t1=t1, t2=t2, degree=degree,
                         shape=shape, obs_aperture=obs_aperture, inc_aperture=inc_aperture)


def product_gauss_grid(n_polar: int, n_azimuth: int, obs_aperture: str = 'full',
                       inc_aperture: str = 'full') -> DirectionGrid:
    """
    Gauss-Legendre nodes in cos θ times n_azimuth uniform angles φ_k = 2πk/n_azimuth

    Exact for spherical harmonics of degree <= min(2 n_polar - 1, n_azimuth - 1).
    """
    if n_polar < 2 or n_azimuth < 3:
        raise UnsupportedGridError(f"Product grid needs n_polar >= 2 and n_azimuth >= 3, "
                                   f"got {n_polar} x {n_azimuth}")
    x, w = np.polynomial.legendre.leggauss(n_polar)
    # north to south
    x, w = x[::-1], w[::-1]
    phi = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    sin_theta = np.sqrt(1.0 - x * x)
    nodes = np.stack([
        np.outer(sin_theta, np.cos(phi)).ravel(),
        np.outer(sin_theta, np.sin(phi)).ravel(),
        np.repeat(x, n_azimuth),
    ], axis=1)
    weights = np.repeat(w, n_azimuth) * (2.0 * np.pi / n_azimuth)
    degree = min(2 * n_polar - 1, n_azimuth - 1)
    return _make_grid(PRODUCT_GAUSS, nodes, weights, degree, (n_polar, n_azimuth),
                      obs_aperture, inc_aperture)


def lebedev_grid(n_dirs: int, obs_aperture: str = 'full', inc_aperture: str = 'full') -> DirectionGrid:
    if n_dirs not in LEBEDEV_RULES:
        raise UnsupportedGridError(
            f"No spherical design with {n_dirs} nodes; available: {sorted(LEBEDEV_RULES)}")
    degree, orbits = LEBEDEV_RULES[n_dirs]
    nodes, weights = [], []
    for code, a, v in orbits:
        points = _octahedral_orbit(code, a)
        nodes.append(points)
        weights.append(np.full(len(points), v))
    nodes = np.vstack(nodes)
    weights = np.concatenate(weights) * 4.0 * np.pi
    return _make_grid(SPHERICAL_DESIGN, nodes, weights, degree, None, obs_aperture, inc_aperture)


def _product_factorization(n_dirs: int) -> Tuple[int, int]:
    """Pick n_polar x n_azimuth = n_dirs with even n_azimuth closest to 1.5 n_polar"""
    best = None
    for n_polar in range(2, n_dirs + 1):
        if n_dirs % n_polar:
            continue
        n_azimuth = n_dirs // n_polar
        if n_azimuth < 4 or n_azimuth % 2:
            continue
        score = abs(n_azimuth - 1.5 * n_polar)
        if best is None or score < best[0]:
            best = (score, n_polar, n_azimuth)
    if best is None:
        raise UnsupportedGridError(f"{n_dirs} directions cannot form a product-Gauss grid "
                                   "with an even azimuth count")
    return best[1], best[2]


def build_grid(n_dirs: int, kind: str = PRODUCT_GAUSS, obs_aperture: str = 'full',
               inc_aperture: str = 'full') -> DirectionGrid:
    """
    Build a direction grid with about n_dirs nodes

    Args:
        n_dirs: Number of nodes (>= 6)
        kind: 'product-gauss' or 'spherical-design'
        obs_aperture: Receiver aperture
        inc_aperture: Transmitter aperture

    Returns:
        DirectionGrid
    """
    if n_dirs < 6:
        raise UnsupportedGridError(f"Need at least 6 directions, got {n_dirs}")
    if kind == PRODUCT_GAUSS:
        n_polar, n_azimuth = _product_factorization(n_dirs)
        return product_gauss_grid(n_polar, n_azimuth, obs_aperture, inc_aperture)
    if kind == SPHERICAL_DESIGN:
        return lebedev_grid(n_dirs, obs_aperture, inc_aperture)
    raise UnsupportedGridError(f"Unknown grid kind: {kind}")


def antipodal_indices(nodes: np.ndarray) -> np.ndarray:
    """Index of -d for every node d"""
    distances = np.linalg.norm(nodes[:, None, :] + nodes[None, :, :], axis=2)
    partner = np.argmin(distances, axis=1)
    if np.max(distances[np.arange(len(nodes)), partner]) > 1e-12:
        raise UnsupportedGridError("Grid is not symmetric under d -> -d")
    return partner


def flip_operator(nodes: NodeSet, targets: NodeSet) -> np.ndarray:
    """
    Matrix of (Rg)(d) = g(-d) from frame components on `nodes` to `targets`

    Entry [(i, k), (j, l)] is t_k(d_i)·t_l(d_j) when d_j = -d_i, so R is a
    signed permutation.
    """
    diff = np.linalg.norm(targets.nodes[:, None, :] + nodes.nodes[None, :, :], axis=2)
    partner = np.argmin(diff, axis=1)
    if np.max(diff[np.arange(len(targets)), partner]) > 1e-12:
        raise UnsupportedGridError("Node set is not closed under d -> -d")
    R = np.zeros((2 * len(targets), 2 * len(nodes)))
    for i, j in enumerate(partner):
        for k, tk in enumerate((targets.t1[i], targets.t2[i])):
            for l, tl in enumerate((nodes.t1[j], nodes.t2[j])):
                R[2 * i + k, 2 * j + l] = np.round(np.dot(tk, tl))
    return R


def grid_from_signature(signature: Dict) -> DirectionGrid:
    """Rebuild a grid from DirectionGrid.signature()"""
    obs = signature.get('obs_aperture', 'full')
    inc = signature.get('inc_aperture', 'full')
    if signature['kind'] == PRODUCT_GAUSS and signature.get('shape'):
        n_polar, n_azimuth = signature['shape']
        return product_gauss_grid(n_polar, n_azimuth, obs, inc)
    return build_grid(signature['n_nodes'], signature['kind'], obs, inc)
