"""
Surface conductivity tensors and their admissibility checks
"""

from .admissibility import (
    AdmissibilityReport,
    check_existence,
    check_uniqueness,
    existence_matrix,
    uniqueness_failures,
)
from .surface_tensor import GeneralTensor2, SurfaceTensor, quadratic_form, transpose

__all__ = [
    'AdmissibilityReport',
    'GeneralTensor2',
    'SurfaceTensor',
    'check_existence',
    'check_uniqueness',
    'existence_matrix',
    'quadratic_form',
    'transpose',
    'uniqueness_failures',
]
