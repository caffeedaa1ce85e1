"""
Vector spherical harmonics on the unit sphere

Conventions:
    Y_n^m(θ, φ) = ε_m P̄_n^|m|(cos θ) e^{imφ}, orthonormal on S², with the
    Condon-Shortley phase ε_m = (-1)^m for m >= 0 and ε_m = 1 for m < 0.
    Equivalently Y_n^{-m} = (-1)^m conj(Y_n^m); P̄ itself carries no sign.
    U_n^m = ∇_S Y_n^m / sqrt(n(n+1))   gradient-type (TM traces)
    X_n^m = ν × U_n^m                  curl-type (TE traces)
    Frames: t1 = θ̂, t2 = φ̂; at the poles the φ = 0 meridian limit is used.

Modes n >= 1 are ordered by (n, m) with m running from -n to n, so degree n
starts at flat index n² - 1.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np

from ..errors import DomainError
from .legendre import legendre_table

UNIT_TOLERANCE = 1e-12


class Family(str, Enum):
    """Mode families: TE carries curl-type traces, TM gradient-type traces"""
    TE = 'TE'
    TM = 'TM'


@dataclass(frozen=True, order=True)
class ModeKey:
    """Index of a vector spherical harmonic mode"""
    n: int
    m: int
    family: Family = Family.TE

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"Mode degree must be >= 1, got {self.n}")
        if abs(self.m) > self.n:
            raise DomainError(f"Mode order |m| must be <= n, got n={self.n}, m={self.m}")

    @property
    def index(self) -> int:
        """Flat position of (n, m) in the mode ordering"""
        return mode_index(self.n, self.m)


def mode_index(n: int, m: int) -> int:
    return n * n - 1 + (m + n)


def mode_count(n_max: int) -> int:
    """Number of (n, m) pairs with 1 <= n <= n_max"""
    return n_max * (n_max + 2)


def mode_keys(n_max: int, family: Family = Family.TE) -> List[ModeKey]:
    return [ModeKey(n, m, family) for n in range(1, n_max + 1) for m in range(-n, n + 1)]


def mode_arrays(n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """Degree and order of every flat mode index"""
    degrees = np.concatenate([np.full(2 * n + 1, n) for n in range(1, n_max + 1)])
    orders = np.concatenate([np.arange(-n, n + 1) for n in range(1, n_max + 1)])
    return degrees.astype(int), orders.astype(int)


def check_directions(directions) -> np.ndarray:
    """Validate an array of unit vectors, returning shape (P, 3)"""
    d = np.atleast_2d(np.asarray(directions, dtype=float))
    if d.shape[-1] != 3:
        raise DomainError(f"Directions must be 3-vectors, got shape {d.shape}")
    norms = np.linalg.norm(d, axis=1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOLERANCE):
        raise DomainError("Directions must be unit vectors within 1e-12")
    return d


def spherical_angles(directions: np.ndarray):
    """cos θ, sin θ and φ; φ = 0 on the polar axis"""
    d = check_directions(directions)
    rho = np.hypot(d[:, 0], d[:, 1])
    cos_theta = np.clip(d[:, 2], -1.0, 1.0)
    phi = np.arctan2(d[:, 1], d[:, 0])
    return cos_theta, rho, phi


def tangential_frames(directions) -> Tuple[np.ndarray, np.ndarray]:
    """Orthonormal tangential frames (t1 = θ̂, t2 = φ̂) at each direction"""
    cos_theta, sin_theta, phi = spherical_angles(directions)
    cp, sp = np.cos(phi), np.sin(phi)
    t1 = np.stack([cos_theta * cp, cos_theta * sp, -sin_theta], axis=1)
    t2 = np.stack([-sp, cp, np.zeros_like(sp)], axis=1)
    return t1, t2


@dataclass
class VSHBasis:
    """
    All modes n <= n_max evaluated at a set of directions

    Y has shape (P, K); the frame components U_frame, X_frame have shape
    (P, K, 2) in (t1, t2); U and X are the Cartesian vectors (P, K, 3).
    """
    n_max: int
    directions: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    Y: np.ndarray
    U_frame: np.ndarray
    X_frame: np.ndarray

    @property
    def U(self) -> np.ndarray:
        return self._to_cartesian(self.U_frame)

    @property
    def X(self) -> np.ndarray:
        return self._to_cartesian(self.X_frame)

    def _to_cartesian(self, frame: np.ndarray) -> np.ndarray:
        return (frame[:, :, 0, None] * self.t1[:, None, :]
                + frame[:, :, 1, None] * self.t2[:, None, :])


def vsh_basis(n_max: int, directions) -> VSHBasis:
    """
    Evaluate Y, U and X for every mode up to n_max

    Args:
        n_max: Highest degree (>= 1)
        directions: Unit vectors, shape (P, 3) or (3,)

    Returns:
        VSHBasis
    """
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    d = check_directions(directions)
    cos_theta, sin_theta, phi = spherical_angles(d)
    t1, t2 = tangential_frames(d)
    table = legendre_table(n_max, cos_theta, sin_theta)

    degrees, orders = mode_arrays(n_max)
    abs_m = np.abs(orders)
    phase = np.where(orders >= 0, (-1.0) ** abs_m, 1.0)
    azimuth = np.exp(1j * np.outer(phi, orders))            # (P, K)
    norm = 1.0 / np.sqrt(degrees * (degrees + 1.0))

    p = table.p[degrees, abs_m].T                             # (P, K)
    q = table.q[degrees, abs_m].T
    dtheta = table.dtheta[degrees, abs_m].T

    Y = phase * p * azimuth
    grad_theta = phase * dtheta * azimuth
    grad_phi = phase * 1j * orders * q * azimuth

    U_frame = np.stack([grad_theta * norm, grad_phi * norm], axis=2)
    # ν × θ̂ = φ̂, ν × φ̂ = -θ̂
    X_frame = np.stack([-U_frame[:, :, 1], U_frame[:, :, 0]], axis=2)
    return VSHBasis(n_max=n_max, directions=d, t1=t1, t2=t2, Y=Y,
                    U_frame=U_frame, X_frame=X_frame)


def vsh_eval(n: int, m: int, direction) -> Tuple[complex, np.ndarray, np.ndarray]:
    """
    Y, U and X of a single mode at one direction

    Args:
        n: Degree >= 1
        m: Order, |m| <= n
        direction: Unit 3-vector

    Returns:
        (Y, U, X) with U and X Cartesian complex 3-vectors
    """
    key = ModeKey(n, m)
    basis = vsh_basis(n, np.asarray(direction, dtype=float).reshape(1, 3))
    k = key.index
    return complex(basis.Y[0, k]), basis.U[0, k], basis.X[0, k]
