"""
Far-field operators as dense matrices in per-node tangential frames

Entry [(i, l), (j, k)] = √w_i √w_j t_l(x̂_i)·E^∞(x̂_i; d_j, t_k(d_j)).
With the square-root weights on both sides the matrix represents the
operator in the discrete L² norm: a kernel g acts through g̃_j = √w_j g(d_j)
and the image is √w_i (Fg)(x̂_i).
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from scipy import linalg

from ..errors import GridMismatchError
from ..scattering import aux_transition, default_truncation, transition_blocks
from ..scattering.mie import validate_tensor
from ..specfun import mode_arrays, vsh_basis
from ..tensor import SurfaceTensor, transpose
from .grid import DirectionGrid, flip_operator

logger = logging.getLogger(__name__)

KIND_F = 'F'
KIND_F_LAMBDA = 'F_lambda'
KIND_MODIFIED = 'modified'


@dataclass
class FarFieldMatrix:
    """Dense (2 n_obs) x (2 n_inc) operator on a DirectionGrid"""
    grid: DirectionGrid
    entries: np.ndarray
    kind: str
    kappa: float
    n_max: int
    lam: Optional[complex] = None
    sigma: Optional[Dict] = None
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self):
        expected = (2 * self.grid.n_obs, 2 * self.grid.n_inc)
        if self.entries.shape != expected:
            raise GridMismatchError(f"Matrix shape {self.entries.shape} does not match grid {expected}")

    @property
    def shape(self):
        return self.entries.shape

    def norm(self) -> float:
        """Spectral norm"""
        return float(np.linalg.norm(self.entries, 2))

    def with_entries(self, entries: np.ndarray, **changes) -> 'FarFieldMatrix':
        return replace(self, entries=entries, metadata=dict(self.metadata), **changes)

    def sidecar(self) -> Dict:
        """JSON metadata stored next to the binary matrix"""
        lam = None if self.lam is None else [complex(self.lam).real, complex(self.lam).imag]
        return {
            'kind': self.kind,
            'kappa': self.kappa,
            'n_max': self.n_max,
            'lambda': lam,
            'sigma': self.sigma,
            'grid': self.grid.signature(),
            'rows': self.shape[0],
            'cols': self.shape[1],
            **self.metadata,
        }


@dataclass
class ModeProjector:
    """
    Receiver and transmitter mode tables of one grid, κ and truncation

    The mode-to-matrix map only depends on the per-degree 2x2 transition
    blocks, so one projector serves every λ of a sweep.
    """
    kappa: float
    n_max: int
    degrees: np.ndarray
    obs_M: np.ndarray   # (2 n_obs, K)
    obs_N: np.ndarray
    inc_M: np.ndarray   # (K, 2 n_inc)
    inc_N: np.ndarray

    @classmethod
    def build(cls, grid: DirectionGrid, kappa: float, n_max: int) -> 'ModeProjector':
        degrees, _ = mode_arrays(n_max)
        receivers, transmitters = grid.receivers, grid.transmitters

        rx = vsh_basis(n_max, receivers.nodes)
        root_w = np.sqrt(receivers.weights)[:, None, None]
        phase_M = (-1j) ** (degrees + 1) / kappa
        phase_N = -((-1j) ** degrees) / kappa
        # (P, K, 2) -> (P, 2, K) -> (2P, K)
        obs_M = (root_w * phase_M[None, :, None] * rx.X_frame).transpose(0, 2, 1).reshape(-1, len(degrees))
        obs_N = (root_w * phase_N[None, :, None] * rx.U_frame).transpose(0, 2, 1).reshape(-1, len(degrees))

        tx = vsh_basis(n_max, transmitters.nodes)
        root_w = np.sqrt(transmitters.weights)[:, None, None]
        prefactor = 1j * kappa * 4.0 * np.pi * (1j ** degrees)
        inc_M = (root_w * prefactor[None, :, None] * tx.X_frame.conj()).transpose(1, 0, 2).reshape(len(degrees), -1)
        inc_N = (root_w * 1j * prefactor[None, :, None] * tx.U_frame.conj()).transpose(1, 0, 2).reshape(len(degrees), -1)
        return cls(kappa=kappa, n_max=n_max, degrees=degrees,
                   obs_M=obs_M, obs_N=obs_N, inc_M=inc_M, inc_N=inc_N)

    def apply(self, blocks: np.ndarray) -> np.ndarray:
        """Matrix entries for transition blocks of shape (n_max+1, 2, 2)"""
        t = blocks[self.degrees]
        scattered_M = t[:, 0, 0, None] * self.inc_M + t[:, 0, 1, None] * self.inc_N
        scattered_N = t[:, 1, 0, None] * self.inc_M + t[:, 1, 1, None] * self.inc_N
        return self.obs_M @ scattered_M + self.obs_N @ scattered_N


def _projector(grid, kappa, n_max, projector):
    if projector is None:
        return ModeProjector.build(grid, kappa, n_max)
    if projector.kappa != kappa or projector.n_max != n_max:
        raise GridMismatchError("Mode projector was built for a different kappa or truncation")
    return projector


def assemble_F(sigma: SurfaceTensor, kappa: float, grid: DirectionGrid, n_max: Optional[int] = None,
               n_jobs: Optional[int] = 1, projector: Optional[ModeProjector] = None) -> FarFieldMatrix:
    """
    Far-field operator of the screen

    Args:
        sigma: Surface tensor
        kappa: Wave number
        grid: Direction grid (receivers and transmitters from its masks)
        n_max: Truncation degree (default ceil(κ) + 15)
        n_jobs: joblib workers for the per-degree solves
        projector: Reusable mode tables for this grid

    Returns:
        FarFieldMatrix of kind 'F'
    """
    n_max = n_max or default_truncation(kappa)
    validate_tensor(sigma)
    projector = _projector(grid, kappa, n_max, projector)
    blocks = transition_blocks(sigma, kappa, n_max, n_jobs)
    entries = projector.apply(blocks)
    logger.debug("Assembled F %s for sigma=%s", entries.shape, sigma.to_dict())
    return FarFieldMatrix(grid=grid, entries=entries, kind=KIND_F, kappa=kappa, n_max=n_max,
                          sigma=sigma.to_dict())


def assemble_F_lambda(lam: complex, kappa: float, grid: DirectionGrid, n_max: Optional[int] = None,
                      projector: Optional[ModeProjector] = None) -> FarFieldMatrix:
    """Far-field operator of the auxiliary problem; Σ is never consulted"""
    n_max = n_max or default_truncation(kappa)
    projector = _projector(grid, kappa, n_max, projector)
    entries = projector.apply(aux_transition(lam, kappa, n_max))
    return FarFieldMatrix(grid=grid, entries=entries, kind=KIND_F_LAMBDA, kappa=kappa,
                          n_max=n_max, lam=complex(lam))


def assemble_F_lambda_sweep(lams: Sequence[complex], kappa: float, grid: DirectionGrid,
                            n_max: Optional[int] = None, n_jobs: Optional[int] = 1) -> List[FarFieldMatrix]:
    """F^(λ) for several λ, ordered as given"""
    n_max = n_max or default_truncation(kappa)
    projector = ModeProjector.build(grid, kappa, n_max)
    tasks = (delayed(assemble_F_lambda)(lam, kappa, grid, n_max, projector) for lam in lams)
    return Parallel(n_jobs=n_jobs, prefer='threads')(tasks)


def modified_operator(F: FarFieldMatrix, F_lam: FarFieldMatrix) -> FarFieldMatrix:
    """𝓕 = F - F^(λ), entrywise"""
    if not F.grid.same_as(F_lam.grid):
        raise GridMismatchError("Far-field operators live on different grids or masks")
    if F.kappa != F_lam.kappa:
        raise GridMismatchError(f"Wave numbers differ: {F.kappa} vs {F_lam.kappa}")
    return FarFieldMatrix(grid=F.grid, entries=F.entries - F_lam.entries, kind=KIND_MODIFIED,
                          kappa=F.kappa, n_max=F.n_max, lam=F_lam.lam, sigma=F.sigma,
                          metadata=dict(F.metadata))


def singular_spectrum(M: FarFieldMatrix) -> np.ndarray:
    return linalg.svdvals(M.entries)


def numerical_rank(M: FarFieldMatrix, tol: float = 1e-10) -> int:
    """Number of singular values above tol·σ_max"""
    s = singular_spectrum(M)
    if s[0] == 0:
        return 0
    rank = int(np.count_nonzero(s > tol * s[0]))
    logger.info("Numerical rank %d of %d (tol %.0e, mode bound 2(N+1)^2=%d)",
                rank, len(s), tol, 2 * (M.n_max + 1) ** 2)
    return rank


def adjoint_defect(F: FarFieldMatrix, F_transposed: FarFieldMatrix) -> float:
    """
    ‖F^H - conj(R F_T R)‖ / ‖F‖ with R the direction flip

    F_T is the operator of the transposed tensor on the same grid. For the
    auxiliary operator pass the same matrix twice.
    """
    if not F.grid.same_as(F_transposed.grid):
        raise GridMismatchError("Far-field operators live on different grids or masks")
    R = flip_operator(F.grid.receivers, F.grid.transmitters)
    flipped = np.conj(R @ F_transposed.entries @ R)
    scale = F.norm()
    defect = float(np.linalg.norm(F.entries.conj().T - flipped, 2))
    return defect / scale if scale > 0 else defect


def assemble_transposed(F: FarFieldMatrix, n_jobs: Optional[int] = 1) -> FarFieldMatrix:
    """Assemble F for the transposed tensor with the settings of F"""
    if F.sigma is None:
        raise ValueError("Matrix carries no surface tensor")
    sigma = transpose(SurfaceTensor.from_dict(F.sigma))
    return assemble_F(sigma, F.kappa, F.grid, F.n_max, n_jobs)
