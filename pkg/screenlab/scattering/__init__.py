"""
Spectral forward solvers on the unit-sphere screen
Screen transmission problem and the Σ-free auxiliary λ-problem
"""

from .auxiliary import (
    AuxModeSolution,
    AuxParameter,
    TangentialExpansion,
    aux_residual,
    aux_transition,
    smoothing_operator_s,
    solve_aux,
    solve_aux_mode,
)
from .mie import (
    FieldExpansion,
    HerglotzDensity,
    ModeBlock,
    PlaneWave,
    ScatteredModes,
    build_mode_block,
    default_truncation,
    evaluate_field,
    far_field,
    herglotz_field,
    incident_coefficients,
    plane_wave_coefficients,
    plane_wave_field,
    solve_forward,
    solve_screen_mode,
    surface_power,
    transition_blocks,
)
from .traces import boundary_traces, screen_residual

__all__ = [
    'AuxModeSolution',
    'AuxParameter',
    'FieldExpansion',
    'HerglotzDensity',
    'ModeBlock',
    'PlaneWave',
    'ScatteredModes',
    'TangentialExpansion',
    'aux_residual',
    'aux_transition',
    'boundary_traces',
    'build_mode_block',
    'default_truncation',
    'evaluate_field',
    'far_field',
    'herglotz_field',
    'incident_coefficients',
    'plane_wave_coefficients',
    'plane_wave_field',
    'screen_residual',
    'smoothing_operator_s',
    'solve_aux',
    'solve_aux_mode',
    'solve_forward',
    'solve_screen_mode',
    'surface_power',
    'transition_blocks',
]
