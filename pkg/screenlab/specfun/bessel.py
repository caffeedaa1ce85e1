"""
Spherical Bessel and Hankel functions
j_n by Miller's downward recurrence, y_n by upward recurrence
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import DomainError

# Rescale threshold for the downward recurrence
_OVERFLOW_GUARD = 1e250


@dataclass(frozen=True)
class RadialPair:
    """
    Radial factor of a spherical mode at argument x

    value is f_n(x); derivative_term is (x f_n(x))'/x, the combination that
    appears in tangential traces of curl-type fields.
    """
    value: complex
    derivative_term: complex


def _check_argument(x: float) -> float:
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"Spherical Bessel argument must be finite and > 0, got {x}")
    return x


def _miller_start(n_max: int, x: float) -> int:
    """Starting index for the downward recurrence"""
    order = max(n_max, int(math.ceil(x)))
    return order + 30 + int(2 * math.sqrt(order))


def spherical_jn_table(n_max: int, x: float) -> np.ndarray:
    """
    Compute j_0(x) ... j_{n_max}(x) with Miller's algorithm

    The recurrence f_{k-1} = (2k+1)/x f_k - f_{k+1} is run downward from an
    index well above max(n_max, x) and normalized against the closed forms
    of j_0 (and j_1 when x is not small).

    Args:
        n_max: Highest order required
        x: Argument, x > 0

    Returns:
        Array of length n_max + 1
    """
    if n_max < 0:
        raise DomainError(f"Order must be >= 0, got {n_max}")
    x = _check_argument(x)

    start = _miller_start(n_max, x)
    f = np.zeros(start + 2)
    f[start] = 1e-30
    for k in range(start, 0, -1):
        f[k - 1] = (2 * k + 1) / x * f[k] - f[k + 1]
        if abs(f[k - 1]) > _OVERFLOW_GUARD:
            f[k - 1:] /= _OVERFLOW_GUARD

    j0 = math.sin(x) / x
    if x < 0.5:
        scale = j0 / f[0]
    else:
        j1 = math.sin(x) / (x * x) - math.cos(x) / x
        scale = (j0 * f[0] + j1 * f[1]) / (f[0] ** 2 + f[1] ** 2)
    return f[:n_max + 1] * scale


def spherical_yn_table(n_max: int, x: float) -> np.ndarray:
    """Compute y_0(x) ... y_{n_max}(x) by upward recurrence"""
    if n_max < 0:
        raise DomainError(f"Order must be >= 0, got {n_max}")
    x = _check_argument(x)

    y = np.zeros(n_max + 1)
    y[0] = -math.cos(x) / x
    if n_max >= 1:
        y[1] = -math.cos(x) / (x * x) - math.sin(x) / x
    for k in range(1, n_max):
        y[k + 1] = (2 * k + 1) / x * y[k] - y[k - 1]
    return y


def sph_bessel_j(n: int, x: float) -> float:
    """Spherical Bessel function of the first kind j_n(x)"""
    return float(spherical_jn_table(n, x)[n])


def sph_bessel_y(n: int, x: float) -> float:
    """Spherical Bessel function of the second kind y_n(x)"""
    return float(spherical_yn_table(n, x)[n])


def sph_hankel1(n: int, x: float) -> complex:
    """Spherical Hankel function of the first kind h_n(x) = j_n(x) + i y_n(x)"""
    return complex(sph_bessel_j(n, x), sph_bessel_y(n, x))


def _derivative_tables(values: np.ndarray, x: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Derivatives and Riccati terms from a table of f_0 ... f_N

    Uses f_n' = f_{n-1} - (n+1)/x f_n and f_0' = -f_1. The top entry of the
    table is only used as f_{n+1} for n = 0, so callers pass one extra order.
    """
    n_max = len(values) - 2
    orders = np.arange(n_max + 1)
    deriv = np.empty(n_max + 1, dtype=values.dtype)
    deriv[0] = -values[1]
    deriv[1:] = values[:n_max] - (orders[1:] + 1) / x * values[1:n_max + 1]
    riccati = values[:n_max + 1] / x + deriv
    return deriv, riccati


def bessel_derivatives(n_max: int, x: float) -> Tuple[np.ndarray, np.ndarray]:
    """Return (j, j') for orders 0..n_max"""
    j = spherical_jn_table(n_max + 1, x)
    deriv, _ = _derivative_tables(j, x)
    return j[:n_max + 1], deriv


def neumann_derivatives(n_max: int, x: float) -> Tuple[np.ndarray, np.ndarray]:
    """Return (y, y') for orders 0..n_max"""
    y = spherical_yn_table(n_max + 1, x)
    deriv, _ = _derivative_tables(y, x)
    return y[:n_max + 1], deriv


def riccati_table(n_max: int, x: float, kind: str = 'j') -> Tuple[np.ndarray, np.ndarray]:
    """
    Radial values and (x f_n)'/x terms for orders 0..n_max

    Args:
        n_max: Highest order
        x: Argument, x > 0
        kind: 'j' for regular modes, 'h' for radiating modes

    Returns:
        (values, derivative_terms), real for 'j', complex for 'h'
    """
    if kind == 'j':
        table = spherical_jn_table(n_max + 1, x)
    elif kind == 'h':
        table = spherical_jn_table(n_max + 1, x) + 1j * spherical_yn_table(n_max + 1, x)
    else:
        raise ValueError(f"Unknown radial kind: {kind}")
    _, riccati = _derivative_tables(table, x)
    return table[:n_max + 1], riccati


def radial_pair(n: int, x: float, kind: str = 'j') -> RadialPair:
    """RadialPair for a single order"""
    values, riccati = riccati_table(n, x, kind)
    return RadialPair(value=complex(values[n]), derivative_term=complex(riccati[n]))
