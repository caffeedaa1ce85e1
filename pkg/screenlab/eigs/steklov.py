"""
Σ-Steklov eigenvalues of the unit ball, one 2x2 pencil per degree

Interior field w = α M_nm + β N_nm (regular modes). With j = j_n(κ) and
ζ = (x j_n)'/x at x = κ the condition ν×curl w + iκΣw_T = λ S w_T splits into
    X: (-κζ + iκa j) α - iκbζ β = λ j α
    U: -iκb j α + (-κ j - iκaζ) β = 0
so B = [[j, 0], [0, 0]] has rank one and λ = det A / (j A22).
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed

from ..errors import DomainError, InteriorResonanceError
from ..scattering.traces import boundary_traces, curl_type_part, relative_residual
from ..specfun import mode_count, riccati_table
from ..tensor import SurfaceTensor

logger = logging.getLogger(__name__)

DEFAULT_N_MAX = 30
TAIL_DEGREES = 10
ZERO_TOLERANCE = 1e-13
MERGE_TOLERANCE = 1e-10

SIGMA_PARAMETERS = ('a_re', 'a_im', 'b_re', 'b_im')


@dataclass(frozen=True)
class Window:
    """Closed rectangle of the λ plane"""
    re_min: float
    re_max: float
    im_min: float = -1.0
    im_max: float = 1.0

    def __post_init__(self):
        bounds = (self.re_min, self.re_max, self.im_min, self.im_max)
        if not all(np.isfinite(bounds)):
            raise DomainError("Eigenvalue window must be bounded")
        if self.re_min > self.re_max or self.im_min > self.im_max:
            raise DomainError(f"Empty eigenvalue window {bounds}")

    def contains(self, lam: complex) -> bool:
        lam = complex(lam)
        return self.re_min <= lam.real <= self.re_max and self.im_min <= lam.imag <= self.im_max

    def to_dict(self) -> Dict:
        return {'re_min': self.re_min, 're_max': self.re_max,
                'im_min': self.im_min, 'im_max': self.im_max}


@dataclass
class Eigenvalue:
    lam: complex
    n: int
    family: str
    vector: Tuple[complex, complex]

    @property
    def multiplicity(self) -> int:
        return 2 * self.n + 1

    def to_dict(self) -> Dict:
        return {
            'lambda_re': complex(self.lam).real,
            'lambda_im': complex(self.lam).imag,
            'n': self.n,
            'family': self.family,
            'multiplicity': self.multiplicity,
        }


@dataclass
class EigenvalueSet:
    kappa: float
    sigma: Dict
    window: Window
    n_max: int
    eigenvalues: List[Eigenvalue] = field(default_factory=list)
    degenerate: List[int] = field(default_factory=list)
    tail_ok: bool = True

    def __len__(self) -> int:
        return len(self.eigenvalues)

    def values(self) -> np.ndarray:
        return np.array([e.lam for e in self.eigenvalues], dtype=complex)

    def distinct(self, tol: float = MERGE_TOLERANCE) -> np.ndarray:
        """Distinct eigenvalues sorted by real part"""
        out: List[complex] = []
        for lam in sorted(self.values(), key=lambda z: (z.real, z.imag)):
            if not out or abs(lam - out[-1]) > tol * max(1.0, abs(lam)):
                out.append(lam)
        return np.array(out, dtype=complex)

    def to_dict(self) -> Dict:
        return {
            'kappa': self.kappa,
            'sigma': self.sigma,
            'window': self.window.to_dict(),
            'n_max': self.n_max,
            'eigenvalues': [e.to_dict() for e in self.eigenvalues],
            'degenerate_degrees': list(self.degenerate),
            'tail_ok': self.tail_ok,
        }


def _radial(n: int, kappa: float) -> Tuple[complex, complex]:
    if kappa <= 0:
        raise DomainError(f"Wave number must be > 0, got {kappa}")
    j_tab, zj_tab = riccati_table(n, kappa, 'j')
    return j_tab[n], zj_tab[n]


def mode_pencil(n: int, kappa: float, sigma: SurfaceTensor) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pencil (A, B) of degree n; eigenvalues solve det(A - λB) = 0

    Raises:
        InteriorResonanceError: j_n(κ) vanishes, so S w_T and B vanish
    """
    if n < 1:
        raise DomainError(f"Degree must be >= 1, got {n}")
    j, zeta = _radial(n, kappa)
    # relative test: j_n(κ) and ζ_n(κ) both decay like κ^n/(2n+1)!!
    if abs(j) <= ZERO_TOLERANCE * abs(zeta):
        raise InteriorResonanceError(n, kappa)
    a, b = complex(sigma.a), complex(sigma.b)
    ik = 1j * kappa
    A = np.array([
        [-kappa * zeta + ik * a * j, -ik * b * zeta],
        [-ik * b * j, -kappa * j - ik * a * zeta],
    ], dtype=complex)
    B = np.array([[j, 0.0], [0.0, 0.0]], dtype=complex)
    return A, B


def _solve_degree(n: int, kappa: float, sigma: SurfaceTensor):
    """(eigenvalue or None, eigenvector, degenerate flag)"""
    A, B = mode_pencil(n, kappa, sigma)
    j = B[0, 0]
    a22 = A[1, 1]
    coupling = A[0, 1] * A[1, 0]
    scale = kappa * (abs(j) + abs(sigma.a) * abs(A[0, 1]) + abs(A[0, 0]))
    if abs(a22) <= ZERO_TOLERANCE * scale:
        if abs(coupling) <= ZERO_TOLERANCE * scale * scale:
            return None, (0.0, 1.0), True
        return None, None, False
    lam = (A[0, 0] * a22 - coupling) / (j * a22)
    vector = np.array([a22, -A[1, 0]], dtype=complex)
    vector /= np.linalg.norm(vector)
    return complex(lam), (complex(vector[0]), complex(vector[1])), False


def _family(sigma: SurfaceTensor) -> str:
    return 'TE' if complex(sigma.b) == 0 else 'TE+TM'


def degree_eigenvalues(kappa: float, sigma: SurfaceTensor, degrees: Sequence[int],
                       n_jobs: Optional[int] = 1):
    if n_jobs == 1:
        return [_solve_degree(n, kappa, sigma) for n in degrees]
    return Parallel(n_jobs=n_jobs, prefer='threads')(
        delayed(_solve_degree)(n, kappa, sigma) for n in degrees)


def eigenvalues_in_window(kappa: float, sigma: SurfaceTensor, window: Window,
                          n_max: int = DEFAULT_N_MAX, n_jobs: Optional[int] = 1) -> EigenvalueSet:
    """
    All Σ-Steklov eigenvalues of degree n <= n_max inside the window

    Args:
        kappa: Wave number
        sigma: Surface tensor
        window: Search rectangle
        n_max: Highest degree
        n_jobs: joblib workers for the per-degree pencils

    Returns:
        EigenvalueSet; degenerate degrees (every λ an eigenvalue) are listed
        apart and never included
    """
    family = _family(sigma)
    result = EigenvalueSet(kappa=kappa, sigma=sigma.to_dict(), window=window, n_max=n_max)
    solved = degree_eigenvalues(kappa, sigma, range(1, n_max + 1), n_jobs)
    for n, (lam, vector, degenerate) in zip(range(1, n_max + 1), solved):
        if degenerate:
            logger.warning("Degree n=%d satisfies the boundary condition for every lambda", n)
            result.degenerate.append(n)
        elif lam is not None and window.contains(lam):
            result.eigenvalues.append(Eigenvalue(lam=lam, n=n, family=family, vector=vector))

    tail = degree_eigenvalues(kappa, sigma, range(n_max + 1, n_max + TAIL_DEGREES + 1), n_jobs)
    late = [n for n, (lam, _, _) in zip(range(n_max + 1, n_max + TAIL_DEGREES + 1), tail)
            if lam is not None and window.contains(lam)]
    if late:
        result.tail_ok = False
        logger.warning("Degrees %s above n_max=%d also have eigenvalues in the window", late, n_max)

    logger.info("Found %d eigenvalues (%d distinct) in %s",
                len(result), len(result.distinct()), window.to_dict())
    return result


def steklov_residual(kappa: float, sigma: SurfaceTensor, eig: Eigenvalue,
                     directions: np.ndarray) -> float:
    """
    Relative collocation residual of ν×curl w + iκΣw_T - λ S w_T

    Every order m of the eigenvalue's degree carries the eigenvector (α, β).
    """
    n = eig.n
    alpha, beta = eig.vector
    coeff_M = np.zeros(mode_count(n), dtype=complex)
    coeff_N = np.zeros(mode_count(n), dtype=complex)
    top = slice(n * n - 1, mode_count(n))
    coeff_M[top] = alpha
    coeff_N[top] = beta
    e_t, rotated_curl = boundary_traces(kappa, n, coeff_M, coeff_N, 'j', directions)
    projected = curl_type_part(kappa, n, coeff_M, 'j', directions)
    sigma_e = sigma.apply(e_t, directions)
    residual = rotated_curl + 1j * kappa * sigma_e - eig.lam * projected
    return relative_residual(residual, rotated_curl, kappa * e_t, eig.lam * projected)


def tensor_family(base: SurfaceTensor, parameter: str) -> Callable[[float], SurfaceTensor]:
    """Family s -> Σ(s) that replaces one of a_re, a_im, b_re, b_im by s"""
    if parameter not in SIGMA_PARAMETERS:
        raise ValueError(f"Unknown tensor parameter: {parameter}")

    def member(s: float) -> SurfaceTensor:
        values = base.to_dict()
        values[parameter] = float(s)
        return SurfaceTensor.from_dict(values)

    return member


def eigenvalue_trace(kappa: float, family: Callable[[float], SurfaceTensor], s_values: Sequence[float],
                     window: Window, n_max: int = DEFAULT_N_MAX,
                     n_jobs: Optional[int] = 1) -> List[Tuple[float, EigenvalueSet]]:
    """Eigenvalue sets along a one-parameter tensor family"""
    rows = []
    for s in s_values:
        rows.append((float(s), eigenvalues_in_window(kappa, family(s), window, n_max, n_jobs)))
    return rows


def trace_rows(trace: List[Tuple[float, EigenvalueSet]]) -> List[List]:
    """Flatten a trace into CSV rows: s, lambda_re, lambda_im, n, family, multiplicity"""
    rows = []
    for s, eigs in trace:
        for e in eigs.eigenvalues:
            rows.append([s, e.lam.real, e.lam.imag, e.n, e.family, e.multiplicity])
    return rows
