"""
Far-field data: direction grids, operator matrices, noise and storage
"""

from .grid import (
    PRODUCT_GAUSS,
    SPHERICAL_DESIGN,
    DirectionGrid,
    NodeSet,
    antipodal_indices,
    aperture_mask,
    build_grid,
    flip_operator,
    grid_from_signature,
    lebedev_grid,
    product_gauss_grid,
)
from .noise import NoiseSpec, add_noise, relative_error
from .operators import (
    FarFieldMatrix,
    ModeProjector,
    adjoint_defect,
    assemble_F,
    assemble_F_lambda,
    assemble_F_lambda_sweep,
    assemble_transposed,
    modified_operator,
    numerical_rank,
    singular_spectrum,
)
from .storage import LambdaCache, decode_ffo1, encode_ffo1, load_matrix, save_matrix

__all__ = [
    'PRODUCT_GAUSS',
    'SPHERICAL_DESIGN',
    'DirectionGrid',
    'FarFieldMatrix',
    'LambdaCache',
    'ModeProjector',
    'NodeSet',
    'NoiseSpec',
    'add_noise',
    'adjoint_defect',
    'antipodal_indices',
    'aperture_mask',
    'assemble_F',
    'assemble_F_lambda',
    'assemble_F_lambda_sweep',
    'assemble_transposed',
    'build_grid',
    'decode_ffo1',
    'encode_ffo1',
    'flip_operator',
    'grid_from_signature',
    'lebedev_grid',
    'load_matrix',
    'modified_operator',
    'numerical_rank',
    'product_gauss_grid',
    'relative_error',
    'save_matrix',
    'singular_spectrum',
]
