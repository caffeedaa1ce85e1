"""
Σ-Steklov eigenvalues of the unit ball by exact per-degree reduction
"""

from .steklov import (
    DEFAULT_N_MAX,
    Eigenvalue,
    EigenvalueSet,
    Window,
    eigenvalue_trace,
    eigenvalues_in_window,
    mode_pencil,
    steklov_residual,
    tensor_family,
    trace_rows,
)

__all__ = [
    'DEFAULT_N_MAX',
    'Eigenvalue',
    'EigenvalueSet',
    'Window',
    'eigenvalue_trace',
    'eigenvalues_in_window',
    'mode_pencil',
    'steklov_residual',
    'tensor_family',
    'trace_rows',
]
