"""
Special functions for spherical modes
Spherical Bessel/Hankel functions, Legendre functions and vector spherical harmonics
"""

from .bessel import (
    RadialPair,
    radial_pair,
    riccati_table,
    sph_bessel_j,
    sph_bessel_y,
    sph_hankel1,
    spherical_jn_table,
    spherical_yn_table,
)
from .vsh import (
    Family,
    ModeKey,
    VSHBasis,
    mode_arrays,
    mode_count,
    mode_index,
    mode_keys,
    tangential_frames,
    vsh_basis,
    vsh_eval,
)

__all__ = [
    'RadialPair',
    'radial_pair',
    'riccati_table',
    'sph_bessel_j',
    'sph_bessel_y',
    'sph_hankel1',
    'spherical_jn_table',
    'spherical_yn_table',
    'Family',
    'ModeKey',
    'VSHBasis',
    'mode_arrays',
    'mode_count',
    'mode_index',
    'mode_keys',
    'tangential_frames',
    'vsh_basis',
    'vsh_eval',
]
