"""
screenlab
Spectral inverse scattering by a closed spherical impedance screen
"""

__version__ = '0.1.0'

from .config import RunConfig, get_preset, load_config
from .eigs import Window, eigenvalues_in_window
from .farfield import FarFieldMatrix, NoiseSpec, add_noise, assemble_F, assemble_F_lambda, build_grid
from .farfield import modified_operator
from .inversion import detect_peaks, sample_probes, scan_indicator
from .scattering import PlaneWave, solve_aux, solve_forward
from .tensor import SurfaceTensor, check_existence

__all__ = [
    '__version__',
    'FarFieldMatrix',
    'NoiseSpec',
    'PlaneWave',
    'RunConfig',
    'SurfaceTensor',
    'Window',
    'add_noise',
    'assemble_F',
    'assemble_F_lambda',
    'build_grid',
    'check_existence',
    'detect_peaks',
    'eigenvalues_in_window',
    'get_preset',
    'load_config',
    'modified_operator',
    'sample_probes',
    'scan_indicator',
    'solve_aux',
    'solve_forward',
]
