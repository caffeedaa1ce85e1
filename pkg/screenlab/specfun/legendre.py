"""
Orthonormal associated Legendre functions

Convention: P̄_n^m(cos θ) carries the factor sqrt((2n+1)/(4π) (n-m)!/(n+m)!)
and no sign factor, for m >= 0 only. The Condon-Shortley phase (-1)^m is
left to vsh.py, which applies it for m >= 0 and builds negative orders from
Y_n^{-m} = (-1)^m conj(Y_n^m).

Besides P̄ the module tabulates Q̄_n^m = P̄_n^m / sin θ for m >= 1, which is a
polynomial in cos θ times sin^{m-1} θ and therefore finite at the poles. All
angular derivatives are expressed through Q̄, so no division by sin θ ever
happens.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class LegendreTable:
    """P̄, Q̄ and dP̄/dθ for 0 <= m <= n <= n_max at a set of points"""
    n_max: int
    p: np.ndarray       # (n_max+1, n_max+1, P), index [n, m]
    q: np.ndarray       # P̄ / sin θ, zero for m = 0
    dtheta: np.ndarray  # dP̄/dθ


def _recurrence_coefficients(n: int, m: int):
    a = np.sqrt((4.0 * n * n - 1.0) / (n * n - m * m))
    b = np.sqrt(((n - 1.0) ** 2 - m * m) * (2.0 * n + 1.0) / ((2.0 * n - 3.0) * (n * n - m * m)))
    return a, b


def legendre_table(n_max: int, cos_theta: np.ndarray, sin_theta: np.ndarray) -> LegendreTable:
    """
    Tabulate orthonormal associated Legendre functions

    Args:
        n_max: Highest degree
        cos_theta: cos θ at each point
        sin_theta: sin θ >= 0 at each point (passed separately to keep poles exact)

    Returns:
        LegendreTable with arrays of shape (n_max+1, n_max+1, P)
    """
    x = np.asarray(cos_theta, dtype=float)
    s = np.asarray(sin_theta, dtype=float)
    size = (n_max + 1, n_max + 1) + x.shape
    p = np.zeros(size)
    q = np.zeros(size)

    p[0, 0] = np.sqrt(1.0 / (4.0 * np.pi))
    for m in range(1, n_max + 1):
        factor = np.sqrt((2.0 * m + 1.0) / (2.0 * m))
        q[m, m] = factor * p[m - 1, m - 1]
        p[m, m] = q[m, m] * s

    for m in range(0, n_max + 1):
        if m + 1 <= n_max:
            p[m + 1, m] = np.sqrt(2.0 * m + 3.0) * x * p[m, m]
            q[m + 1, m] = np.sqrt(2.0 * m + 3.0) * x * q[m, m]
        for n in range(m + 2, n_max + 1):
            a, b = _recurrence_coefficients(n, m)
            p[n, m] = a * x * p[n - 1, m] - b * p[n - 2, m]
            q[n, m] = a * x * q[n - 1, m] - b * q[n - 2, m]
    q[:, 0] = 0.0

    dtheta = np.zeros(size)
    for n in range(1, n_max + 1):
        # m = 0: dP̄_n^0/dθ = -sqrt(n(n+1)) P̄_n^1
        dtheta[n, 0] = -np.sqrt(n * (n + 1.0)) * p[n, 1]
        for m in range(1, n + 1):
            lower = q[n - 1, m] if m <= n - 1 else 0.0
            coupling = np.sqrt((2.0 * n + 1.0) * (n * n - m * m) / (2.0 * n - 1.0))
            dtheta[n, m] = n * x * q[n, m] - coupling * lower

    return LegendreTable(n_max=n_max, p=p, q=q, dtheta=dtheta)
