"""
Forward scattering by the closed unit-sphere screen

Fields are expanded in the modes
    M_nm = z_n(κr) X_nm(x̂)
    N_nm = curl M_nm / κ = -(sqrt(n(n+1)) z_n(κr)/(κr)) Y_nm r̂ - ζ_n(κr) U_nm
with z_n = j_n (regular) or h_n (radiating) and ζ_n(x) = (x z_n(x))'/x.
On r = 1 the traces are
    M: E_T = z X,    ν×curl E = -κ ζ X
    N: E_T = -ζ U,   ν×curl E = -κ z U
and Σ = aI + bJ maps X to aX - bU and U to aU + bX, so every (n, m) couples
only its own TE/TM pair.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from joblib import Parallel, delayed

from ..errors import DomainError, ModeSingularityError
from ..specfun import ModeKey, mode_arrays, mode_count, riccati_table, vsh_basis
from ..specfun.vsh import Family, check_directions
from ..tensor import SurfaceTensor, check_existence
from ..utils.io import read_json, write_json
from .traces import boundary_traces

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12
TAIL_TOLERANCE = 1e-10


def default_truncation(kappa: float) -> int:
    """N = ceil(κ) + 15"""
    return int(math.ceil(kappa)) + 15


@dataclass(frozen=True)
class PlaneWave:
    """E^i(x) = iκ (d×p)×d e^{iκ d·x}"""
    direction: Tuple[float, float, float]
    polarization: Tuple[complex, complex, complex]
    kappa: float

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        p = np.asarray(self.polarization, dtype=complex)
        if self.kappa <= 0:
            raise DomainError(f"Wave number must be > 0, got {self.kappa}")
        if abs(np.linalg.norm(d) - 1.0) > 1e-12:
            raise DomainError("Propagation direction must be a unit vector")
        if np.linalg.norm(p) == 0:
            raise DomainError("Polarization must be nonzero")
        if abs(np.dot(d, p)) > 1e-12 * np.linalg.norm(p):
            raise DomainError("Polarization must be orthogonal to the propagation direction")

    @property
    def d(self) -> np.ndarray:
        return np.asarray(self.direction, dtype=float)

    @property
    def p(self) -> np.ndarray:
        return np.asarray(self.polarization, dtype=complex)


@dataclass
class HerglotzDensity:
    """
    Tangential kernel g sampled on quadrature nodes

    The incident field is the discrete Herglotz wave
    E^i(x) = iκ Σ_j w_j g(d_j) e^{iκ d_j·x}.
    """
    nodes: np.ndarray    # (P, 3)
    weights: np.ndarray  # (P,)
    values: np.ndarray   # (P, 3) Cartesian, tangential
    kappa: float

    @classmethod
    def on_grid(cls, grid, frame_values: np.ndarray, kappa: float) -> 'HerglotzDensity':
        """Build from (P, 2) frame components on a DirectionGrid's active nodes"""
        comps = np.asarray(frame_values, dtype=complex).reshape(-1, 2)
        values = comps[:, :1] * grid.t1 + comps[:, 1:] * grid.t2
        return cls(nodes=grid.nodes, weights=grid.weights, values=values, kappa=kappa)


Incident = Union[PlaneWave, HerglotzDensity]


@dataclass
class ScatteredModes:
    """Radiating-mode coefficients, flat over (n, m) for 1 <= n <= n_max"""
    kappa: float
    n_max: int
    scattered_M: np.ndarray
    scattered_N: np.ndarray

    def keys(self, family: Family = Family.TE) -> List[ModeKey]:
        degrees, orders = mode_arrays(self.n_max)
        return [ModeKey(int(n), int(m), family) for n, m in zip(degrees, orders)]


@dataclass
class FieldExpansion(ScatteredModes):
    """Incident, interior (j-type) and scattered (h-type) coefficients"""
    incident_M: np.ndarray
    incident_N: np.ndarray
    interior_M: np.ndarray
    interior_N: np.ndarray

    def coefficient(self, key: ModeKey) -> Dict[str, complex]:
        k = key.index
        if key.family == Family.TE:
            return {'incident': complex(self.incident_M[k]), 'interior': complex(self.interior_M[k]),
                    'scattered': complex(self.scattered_M[k])}
        return {'incident': complex(self.incident_N[k]), 'interior': complex(self.interior_N[k]),
                'scattered': complex(self.scattered_N[k])}

    def to_dict(self) -> Dict:
        """Mode-keyed coefficient lists with [re, im] pairs"""
        degrees, orders = mode_arrays(self.n_max)
        modes = []
        for k, (n, m) in enumerate(zip(degrees, orders)):
            for family, inc, interior, sca in (
                ('TE', self.incident_M, self.interior_M, self.scattered_M),
                ('TM', self.incident_N, self.interior_N, self.scattered_N),
            ):
                modes.append({
                    'n': int(n), 'm': int(m), 'family': family,
                    'incident': [inc[k].real, inc[k].imag],
                    'interior': [interior[k].real, interior[k].imag],
                    'scattered': [sca[k].real, sca[k].imag],
                })
        return {'kappa': self.kappa, 'n_max': self.n_max, 'modes': modes}

    @classmethod
    def from_dict(cls, data: Dict) -> 'FieldExpansion':
        n_max = int(data['n_max'])
        size = mode_count(n_max)
        arrays = {name: np.zeros(size, dtype=complex) for name in (
            'incident_M', 'incident_N', 'interior_M', 'interior_N', 'scattered_M', 'scattered_N')}
        for entry in data['modes']:
            k = ModeKey(entry['n'], entry['m']).index
            suffix = 'M' if entry['family'] == 'TE' else 'N'
            for part in ('incident', 'interior', 'scattered'):
                re, im = entry[part]
                arrays[f"{part}_{suffix}"][k] = complex(re, im)
        return cls(kappa=float(data['kappa']), n_max=n_max, **arrays)

    def save(self, filepath: str):
        write_json(filepath, self.to_dict())

    @classmethod
    def load(cls, filepath: str) -> 'FieldExpansion':
        return cls.from_dict(read_json(filepath))


@dataclass
class ModeBlock:
    """
    Matching conditions at r = 1 for one degree

    Unknowns (c^M, c^N, s^M, s^N): interior TE/TM and scattered TE/TM.
    Rows: E_T continuity (X, U) and rotated-curl jump (X, U).
    """
    n: int
    matrix: np.ndarray  # (4, 4)
    j: float
    zj: float
    h: complex
    zh: complex

    def rhs(self, p_M, p_N) -> np.ndarray:
        p_M = np.atleast_1d(np.asarray(p_M, dtype=complex))
        p_N = np.atleast_1d(np.asarray(p_N, dtype=complex))
        return np.stack([self.j * p_M, self.zj * p_N, self.zj * p_M, self.j * p_N])

    @property
    def decoupled(self) -> bool:
        return self.matrix[2, 1] == 0 and self.matrix[3, 0] == 0


def build_mode_block(n: int, sigma: SurfaceTensor, kappa: float,
                     j: float, zj: float, h: complex, zh: complex) -> ModeBlock:
    a, b = complex(sigma.a), complex(sigma.b)
    matrix = np.array([
        [j, 0.0, -h, 0.0],
        [0.0, zj, 0.0, -zh],
        [zj - 1j * a * j, 1j * b * zj, -zh, 0.0],
        [1j * b * j, j + 1j * a * zj, 0.0, -h],
    ], dtype=complex)
    return ModeBlock(n=n, matrix=matrix, j=j, zj=zj, h=h, zh=zh)


def _equilibrated_condition(matrix: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    rows = 1.0 / np.max(np.abs(matrix), axis=1)
    scaled = matrix * rows[:, None]
    cols = 1.0 / np.max(np.abs(scaled), axis=0)
    scaled = scaled * cols[None, :]
    return float(np.linalg.cond(scaled)), scaled, rows, cols


def _check_condition(n: int, matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    condition, scaled, rows, cols = _equilibrated_condition(matrix)
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise ModeSingularityError(n, condition)
    return scaled, rows, cols


def solve_mode_block(block: ModeBlock, p_M, p_N) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Solve one degree for all orders at once

    Returns:
        (c_M, c_N, s_M, s_N) arrays matching the shape of p_M
    """
    A = block.matrix
    p_M = np.atleast_1d(np.asarray(p_M, dtype=complex))
    p_N = np.atleast_1d(np.asarray(p_N, dtype=complex))

    if block.decoupled:
        te = A[np.ix_([0, 2], [0, 2])]
        tm = A[np.ix_([1, 3], [1, 3])]
        _check_condition(block.n, te)
        _check_condition(block.n, tm)
        # Cramer's rule keeps the Σ = 0 scattered coefficients exactly zero
        det_te = te[0, 0] * te[1, 1] - te[0, 1] * te[1, 0]
        c_M = p_M * (block.j * te[1, 1] - te[0, 1] * block.zj) / det_te
        s_M = p_M * (te[0, 0] * block.zj - te[1, 0] * block.j) / det_te
        det_tm = tm[0, 0] * tm[1, 1] - tm[0, 1] * tm[1, 0]
        c_N = p_N * (block.zj * tm[1, 1] - tm[0, 1] * block.j) / det_tm
        s_N = p_N * (tm[0, 0] * block.j - tm[1, 0] * block.zj) / det_tm
        return c_M, c_N, s_M, s_N

    scaled, rows, cols = _check_condition(block.n, A)
    rhs = block.rhs(p_M, p_N) * rows[:, None]
    solution = np.linalg.solve(scaled, rhs) * cols[:, None]
    return solution[0], solution[1], solution[2], solution[3]


def solve_screen_mode(n: int, sigma: SurfaceTensor, kappa: float, p_M, p_N):
    """
    Interior and scattered coefficients of degree n for given incident ones

    Args:
        n: Degree >= 1
        sigma: Surface tensor
        kappa: Wave number > 0
        p_M: TE incident coefficient(s) of this degree
        p_N: TM incident coefficient(s) of this degree

    Returns:
        (c_M, c_N, s_M, s_N)
    """
    if kappa <= 0:
        raise DomainError(f"Wave number must be > 0, got {kappa}")
    j_tab, zj_tab = riccati_table(n, kappa, 'j')
    h_tab, zh_tab = riccati_table(n, kappa, 'h')
    block = build_mode_block(n, sigma, kappa, j_tab[n], zj_tab[n], h_tab[n], zh_tab[n])
    return solve_mode_block(block, p_M, p_N)


def transition_blocks(sigma: SurfaceTensor, kappa: float, n_max: int,
                      n_jobs: Optional[int] = 1) -> np.ndarray:
    """
    Per-degree 2x2 maps from incident (p^M, p^N) to scattered (s^M, s^N)

    Returns:
        Array (n_max+1, 2, 2); row n holds [[t_MM, t_MN], [t_NM, t_NN]], row 0 unused
    """
    j_tab, zj_tab = riccati_table(n_max, kappa, 'j')
    h_tab, zh_tab = riccati_table(n_max, kappa, 'h')

    def degree(n):
        block = build_mode_block(n, sigma, kappa, j_tab[n], zj_tab[n], h_tab[n], zh_tab[n])
        _, _, s_M, s_N = solve_mode_block(block, [1.0, 0.0], [0.0, 1.0])
        return np.array([s_M, s_N])

    blocks = _run_degrees(degree, n_max, n_jobs)
    out = np.zeros((n_max + 1, 2, 2), dtype=complex)
    out[1:] = np.array(blocks)
    return out


def _run_degrees(func, n_max: int, n_jobs: Optional[int]):
    """Evaluate func(n) for n = 1..n_max, ordered by n"""
    if n_jobs == 1:
        return [func(n) for n in range(1, n_max + 1)]
    return Parallel(n_jobs=n_jobs, prefer='threads')(delayed(func)(n) for n in range(1, n_max + 1))


def incident_coefficients(wave: Incident, n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Regular-mode coefficients of a plane wave or Herglotz wave

    Uses ∫ e^{iκx·d} X_nm(d) ds = 4π iⁿ M_nm(x) and
    ∫ e^{iκx·d} U_nm(d) ds = 4π i^{n+1} N_nm(x), so a plane wave with
    polarization p contributes iκ·4π iⁿ p·conj(X_nm(d)) to p^M_nm and
    iκ·4π i^{n+1} p·conj(U_nm(d)) to p^N_nm.
    """
    if isinstance(wave, PlaneWave):
        nodes = wave.d.reshape(1, 3)
        d = wave.d
        p = wave.p
        amplitudes = (np.cross(np.cross(d, p), d)).reshape(1, 3)
    else:
        nodes = check_directions(wave.nodes)
        amplitudes = wave.weights[:, None] * np.asarray(wave.values, dtype=complex)

    basis = vsh_basis(n_max, nodes)
    degrees, _ = mode_arrays(n_max)
    prefactor = 1j * wave.kappa * 4.0 * np.pi * (1j ** degrees)
    p_M = prefactor * np.einsum('pkc,pc->k', basis.X.conj(), amplitudes)
    p_N = prefactor * 1j * np.einsum('pkc,pc->k', basis.U.conj(), amplitudes)
    return p_M, p_N


def plane_wave_coefficients(wave: PlaneWave, n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """Incident coefficients of a plane wave, with a truncation tail check"""
    p_M, p_N = incident_coefficients(wave, n_max)
    _warn_tail(p_M, p_N, n_max, wave.kappa, 1.0)
    return p_M, p_N


def _warn_tail(p_M: np.ndarray, p_N: np.ndarray, n_max: int, kappa: float, radius: float):
    """Warn when the degree-N regular contribution at this radius exceeds 1e-10"""
    j_tab, zj_tab = riccati_table(n_max, kappa * radius, 'j')
    top = slice(n_max * n_max - 1, mode_count(n_max))
    tail = max(np.max(np.abs(p_M[top])) * abs(j_tab[n_max]),
               np.max(np.abs(p_N[top])) * abs(zj_tab[n_max]))
    if tail > TAIL_TOLERANCE:
        logger.warning("Truncation tail %.3e exceeds %.0e at N=%d (kappa*r=%.3f)",
                       tail, TAIL_TOLERANCE, n_max, kappa * radius)


def validate_tensor(sigma: SurfaceTensor):
    report = check_existence(sigma)
    if not report.admissible:
        logger.warning("Surface tensor %s is not admissible (uniqueness_ok=%s, existence_ok=%s)",
                       sigma.to_dict(), report.uniqueness_ok, report.existence_ok)
    return report


def solve_forward(wave: Incident, sigma: SurfaceTensor, n_max: Optional[int] = None,
                  n_jobs: Optional[int] = 1) -> FieldExpansion:
    """
    Solve the screen problem for a plane wave or Herglotz density

    Args:
        wave: PlaneWave or HerglotzDensity
        sigma: Surface tensor
        n_max: Truncation degree (default ceil(κ) + 15)
        n_jobs: joblib workers for the per-degree solves

    Returns:
        FieldExpansion
    """
    kappa = wave.kappa
    n_max = n_max or default_truncation(kappa)
    validate_tensor(sigma)

    if isinstance(wave, PlaneWave):
        p_M, p_N = plane_wave_coefficients(wave, n_max)
    else:
        p_M, p_N = incident_coefficients(wave, n_max)

    j_tab, zj_tab = riccati_table(n_max, kappa, 'j')
    h_tab, zh_tab = riccati_table(n_max, kappa, 'h')

    def degree(n):
        sl = slice(n * n - 1, (n + 1) * (n + 1) - 1)
        block = build_mode_block(n, sigma, kappa, j_tab[n], zj_tab[n], h_tab[n], zh_tab[n])
        return solve_mode_block(block, p_M[sl], p_N[sl])

    results = _run_degrees(degree, n_max, n_jobs)
    c_M, c_N, s_M, s_N = (np.concatenate([r[i] for r in results]) for i in range(4))
    return FieldExpansion(kappa=kappa, n_max=n_max, scattered_M=s_M, scattered_N=s_N,
                          incident_M=p_M, incident_N=p_N, interior_M=c_M, interior_N=c_N)


def _mode_fields(n_max: int, kappa: float, r: float, x_hat: np.ndarray, kind: str):
    """Cartesian M_nm and N_nm at one point, each of shape (K, 3)"""
    basis = vsh_basis(n_max, x_hat.reshape(1, 3))
    values, riccati = riccati_table(n_max, kappa * r, kind)
    degrees, _ = mode_arrays(n_max)
    z = values[degrees]
    zeta = riccati[degrees]
    c = np.sqrt(degrees * (degrees + 1.0))
    X = basis.X[0]
    U = basis.U[0]
    Y = basis.Y[0]
    M = z[:, None] * X
    N = -(c * z / (kappa * r) * Y)[:, None] * x_hat[None, :] - zeta[:, None] * U
    return M, N


def evaluate_field(e: FieldExpansion, x, side: str, part: str = 'total') -> np.ndarray:
    """
    Evaluate the expansion at a point off the screen

    Args:
        e: Solved FieldExpansion
        x: Point with 0 < |x| != 1
        side: 'interior' (|x| < 1) or 'exterior' (|x| > 1)
        part: 'total', 'incident' or 'scattered' (exterior only)

    Returns:
        Complex 3-vector
    """
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0 or abs(r - 1.0) < 1e-14:
        raise DomainError(f"Field evaluation needs 0 < |x| != 1, got |x|={r}")
    if side == 'interior' and r > 1:
        raise DomainError("Interior evaluation requires |x| < 1")
    if side == 'exterior' and r < 1:
        raise DomainError("Exterior evaluation requires |x| > 1")
    if side not in ('interior', 'exterior'):
        raise ValueError(f"Unknown side: {side}")
    x_hat = x / r

    if side == 'interior':
        _warn_tail(e.interior_M, e.interior_N, e.n_max, e.kappa, r)
        M, N = _mode_fields(e.n_max, e.kappa, r, x_hat, 'j')
        return e.interior_M @ M + e.interior_N @ N

    field = np.zeros(3, dtype=complex)
    if part in ('total', 'incident'):
        _warn_tail(e.incident_M, e.incident_N, e.n_max, e.kappa, r)
        M, N = _mode_fields(e.n_max, e.kappa, r, x_hat, 'j')
        field += e.incident_M @ M + e.incident_N @ N
    if part in ('total', 'scattered'):
        M, N = _mode_fields(e.n_max, e.kappa, r, x_hat, 'h')
        field += e.scattered_M @ M + e.scattered_N @ N
    return field


def far_field(e: ScatteredModes, x_hat) -> np.ndarray:
    """
    Far-field pattern from the radiating coefficients

    h_n(κr) ~ (-i)^{n+1} e^{iκr}/(κr) gives
    E^∞ = Σ s^M (-i)^{n+1}/κ X - s^N (-i)^n/κ U.

    Args:
        e: Any object with kappa, n_max, scattered_M and scattered_N
        x_hat: Unit vector (3,) or array (P, 3)

    Returns:
        Complex tangential vectors, shape (3,) or (P, 3)
    """
    single = np.ndim(x_hat) == 1
    basis = vsh_basis(e.n_max, x_hat)
    degrees, _ = mode_arrays(e.n_max)
    phase_M = (-1j) ** (degrees + 1) / e.kappa
    phase_N = -((-1j) ** degrees) / e.kappa
    pattern = (np.einsum('k,pkc->pc', e.scattered_M * phase_M, basis.X)
               + np.einsum('k,pkc->pc', e.scattered_N * phase_N, basis.U))
    return pattern[0] if single else pattern


def plane_wave_field(wave: PlaneWave, x) -> np.ndarray:
    """Direct evaluation of iκ (d×p)×d e^{iκ d·x}"""
    x = np.asarray(x, dtype=float)
    d, p = wave.d, wave.p
    amplitude = 1j * wave.kappa * np.cross(np.cross(d, p), d)
    return amplitude * np.exp(1j * wave.kappa * np.dot(x, d))


def herglotz_field(density: HerglotzDensity, x) -> np.ndarray:
    """Direct evaluation of iκ Σ_j w_j g_j e^{iκ d_j·x}"""
    x = np.asarray(x, dtype=float)
    phases = np.exp(1j * density.kappa * density.nodes @ x) * density.weights
    return 1j * density.kappa * (phases @ density.values)


def surface_power(e: FieldExpansion, sigma: SurfaceTensor, nodes: np.ndarray,
                  weights: np.ndarray) -> float:
    """Re ∫_Γ (ΣE_T)·conj(E_T) dA by quadrature"""
    e_t, _ = boundary_traces(e.kappa, e.n_max, e.interior_M, e.interior_N, 'j', nodes)
    sigma_e = sigma.apply(e_t, nodes)
    return float(np.real(np.sum(weights * np.einsum('pc,pc->p', sigma_e, e_t.conj()))))
