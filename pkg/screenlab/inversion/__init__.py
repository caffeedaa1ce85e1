"""
Far-field equation solves, λ sweeps and peak detection
"""

from .indicator import IndicatorCurve, lambda_grid, scan_indicator
from .peaks import PeakList, detect_peaks
from .probes import ProbeSet, dipole_far_field, dipole_rhs, sample_probes
from .tikhonov import RegularizationPolicy, TikhonovFactorization, morozov_alpha, tikhonov_solve

__all__ = [
    'IndicatorCurve',
    'PeakList',
    'ProbeSet',
    'RegularizationPolicy',
    'TikhonovFactorization',
    'detect_peaks',
    'dipole_far_field',
    'dipole_rhs',
    'lambda_grid',
    'morozov_alpha',
    'sample_probes',
    'scan_indicator',
    'tikhonov_solve',
]
