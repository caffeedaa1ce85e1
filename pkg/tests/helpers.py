"""
Random directions and polarizations for the test suites
"""

import numpy as np


def random_unit(rng, count=None):
    v = rng.normal(size=(count or 1, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    return v if count else v[0]


def random_tangent(rng, d):
    """Unit complex vector orthogonal to the real direction d"""
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    v -= np.dot(d, v) * d
    return v / np.linalg.norm(v)
