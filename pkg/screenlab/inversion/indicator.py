"""
Indicator curve: mean Tikhonov-solution norm of the far-field equation over λ

For each λ the modified operator F - F^(λ) is factored once and the
dipole far fields of every probe and polarization are solved against it.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from ..farfield.operators import FarFieldMatrix, ModeProjector, assemble_F_lambda, modified_operator
from ..farfield.storage import LambdaCache
from ..utils.io import read_csv, write_csv
from .probes import ProbeSet, dipole_rhs
from .tikhonov import RegularizationPolicy, TikhonovFactorization

logger = logging.getLogger(__name__)

CSV_HEADER = ['lambda_re', 'lambda_im', 'indicator', 'residual_mean', 'valid']


@dataclass
class IndicatorCurve:
    """Indicator per λ sample; invalid samples carry NaN"""
    lams: np.ndarray
    indicator: np.ndarray
    residual_mean: np.ndarray
    valid: np.ndarray
    alphas: np.ndarray
    errors: Dict[int, str] = field(default_factory=dict)
    modified: bool = True

    def __len__(self) -> int:
        return len(self.lams)

    @property
    def n_invalid(self) -> int:
        return int(np.count_nonzero(~self.valid))

    def rows(self) -> List[List]:
        return [[lam.real, lam.imag, ind, res, bool(ok)]
                for lam, ind, res, ok in zip(self.lams, self.indicator, self.residual_mean, self.valid)]

    def save_csv(self, path: Union[str, Path]):
        write_csv(path, CSV_HEADER, self.rows())

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> 'IndicatorCurve':
        columns = read_csv(path)
        lams = np.array([complex(float(re), float(im))
                         for re, im in zip(columns['lambda_re'], columns['lambda_im'])])
        return cls(
            lams=lams,
            indicator=np.array([float(v) for v in columns['indicator']]),
            residual_mean=np.array([float(v) for v in columns['residual_mean']]),
            valid=np.array([v == '1' for v in columns['valid']]),
            alphas=np.full(len(lams), np.nan),
        )

    def to_dict(self) -> Dict:
        return {
            'count': len(self),
            'invalid': self.n_invalid,
            'modified': self.modified,
            'errors': {str(k): v for k, v in self.errors.items()},
        }


def _solve_sample(M: np.ndarray, rhs: np.ndarray, policy: RegularizationPolicy):
    """(mean ‖g‖, mean residual, α) for one operator and all right-hand sides"""
    factorization = TikhonovFactorization(M)
    if policy.policy == 'fixed':
        alpha = policy.fixed_alpha(factorization)
        g, residual = factorization.solve(rhs, alpha)
        norms = np.linalg.norm(g, axis=1)
        return float(np.mean(norms)), float(np.mean(residual)), alpha

    norms, residuals, alphas = [], [], []
    for b in rhs:
        alpha = policy.alpha_for(factorization, b)
        g, residual = factorization.solve(b, alpha)
        norms.append(np.linalg.norm(g))
        residuals.append(residual)
        alphas.append(alpha)
    return float(np.mean(norms)), float(np.mean(residuals)), float(np.mean(alphas))


def scan_indicator(F_data: FarFieldMatrix, lams: Sequence[complex], probes: ProbeSet,
                   kappa: Optional[float] = None, n_max: Optional[int] = None,
                   policy: Optional[RegularizationPolicy] = None, n_jobs: Optional[int] = 1,
                   cache: Optional[LambdaCache] = None, modified: bool = True,
                   progress: bool = False) -> IndicatorCurve:
    """
    Sweep λ and record the mean solution norm of 𝓕 g = dipole far field

    Args:
        F_data: Measured (possibly noisy) far-field matrix
        lams: λ samples, real or complex
        probes: Probe points; each contributes three polarizations
        kappa: Wave number (default F_data.kappa)
        n_max: Truncation of F^(λ) (default F_data.n_max)
        policy: Regularization policy (default fixed, ρ = 1e-10)
        n_jobs: joblib workers across λ
        cache: On-disk F^(λ) cache
        modified: False solves against F_data alone (negative control)
        progress: Show a tqdm bar on stderr

    Returns:
        IndicatorCurve; samples whose F^(λ) or factorization fails are
        marked invalid and the sweep continues
    """
    kappa = kappa or F_data.kappa
    n_max = n_max or F_data.n_max
    policy = policy or RegularizationPolicy()
    if policy.policy == 'morozov' and policy.noise_level == 0:
        logger.warning("Morozov policy needs a noise level > 0; using the fixed policy")
        policy = RegularizationPolicy('fixed', policy.rho, policy.tau)
    lams = np.asarray(lams, dtype=complex)
    grid = F_data.grid
    rhs = dipole_rhs(grid.receivers, probes, kappa)

    projector = ModeProjector.build(grid, kappa, n_max) if modified else None

    def operator(lam):
        if not modified:
            return F_data.entries
        if cache is not None:
            F_lam, _ = cache.get_or_assemble(lam, kappa, grid, n_max, projector)
        else:
            F_lam = assemble_F_lambda(lam, kappa, grid, n_max, projector)
        return modified_operator(F_data, F_lam).entries

    def sample(lam):
        try:
            return _solve_sample(operator(lam), rhs, policy), None
        except (ArithmeticError, np.linalg.LinAlgError) as exc:
            return None, str(exc)

    count = len(lams)
    jobs = Parallel(n_jobs=n_jobs, prefer='threads', return_as='generator')(
        delayed(sample)(lam) for lam in lams)
    results = list(tqdm(jobs, total=count, desc="lambda sweep", unit="lambda", disable=not progress))

    curve = IndicatorCurve(lams=lams, indicator=np.full(count, np.nan),
                           residual_mean=np.full(count, np.nan), valid=np.zeros(count, dtype=bool),
                           alphas=np.full(count, np.nan), modified=modified)
    for i, (values, error) in enumerate(results):
        if error is not None:
            logger.warning("lambda=%s marked invalid: %s", lams[i], error)
            curve.errors[i] = error
            continue
        curve.indicator[i], curve.residual_mean[i], curve.alphas[i] = values
        curve.valid[i] = True
    logger.info("Indicator sweep: %d samples, %d invalid", count, curve.n_invalid)
    return curve


def lambda_grid(lam_min: float, lam_max: float, count: int, im: float = 0.0) -> np.ndarray:
    """Uniform real λ samples, shifted by i·im"""
    if count < 2:
        raise ValueError(f"Need at least 2 lambda samples, got {count}")
    return np.linspace(lam_min, lam_max, count) + 1j * im
