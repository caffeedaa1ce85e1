"""
Run configuration
Defaults for every pipeline stage, preset loading and validation
"""

import copy
import json
import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional

import numpy as np

from .errors import ConfigError

logger = logging.getLogger(__name__)

PRESETS_DIR = Path(__file__).parent.parent / "data" / "presets"

# Wave number of the incident field
KAPPA = 1.9

# Surface tensor Σ = aI + bJ
SIGMA_CONFIG = {
    'a_re': 0.0,
    'a_im': 0.5,
    'b_re': 0.0,
    'b_im': 0.0,
}

# Direction grid shared by receivers and transmitters
GRID_CONFIG = {
    'kind': 'product-gauss',     # or 'spherical-design'
    'n_dirs': 96,                # 8 polar x 12 azimuth
    'n_polar': None,             # explicit factorization overrides n_dirs
    'n_azimuth': None,
    'obs_aperture': 'full',      # full | upper | lower | cap:<deg>
    'inc_aperture': 'full',
}

# Auxiliary parameter sweep
LAMBDA_GRID_CONFIG = {
    'min': -0.5,
    'max': 1.0,
    'count': 501,
    'im': 0.0,
}

NOISE_CONFIG = {
    'level': 0.0015,             # relative spectral norm
    'seed': 20240601,
    'distribution': 'unit-square',
}

PROBE_CONFIG = {
    'count': 15,
    'r_max': 0.6,
    'seed': 20240602,
}

TIKHONOV_CONFIG = {
    'policy': 'fixed',           # or 'morozov'
    'rho': 1e-10,                # α = ρ σ_max²
    'tau': 1.1,
}

EIGS_CONFIG = {
    'n_max': 30,
    're_min': -0.5,
    're_max': 1.0,
    'im_min': -1.0,
    'im_max': 1.0,
}

# Eigenvalue trace over one tensor parameter
TRACE_CONFIG = {
    'parameter': 'a_im',
    's_min': 0.3,
    's_max': 0.7,
    'count': 21,
}

# Single plane wave for the forward command
FORWARD_CONFIG = {
    'direction': [0.0, 0.0, 1.0],
    'polarization': [1.0, 0.0, 0.0],
}

PEAK_CONFIG = {
    'prominence_factor': 2.0,
}

DEFAULTS = {
    'kappa': KAPPA,
    'sigma': SIGMA_CONFIG,
    'truncation': None,          # None -> ceil(κ) + 15
    'grid': GRID_CONFIG,
    'lambda_grid': LAMBDA_GRID_CONFIG,
    'noise': NOISE_CONFIG,
    'probes': PROBE_CONFIG,
    'tikhonov': TIKHONOV_CONFIG,
    'eigs': EIGS_CONFIG,
    'trace': TRACE_CONFIG,
    'forward': FORWARD_CONFIG,
    'peaks': PEAK_CONFIG,
    'cache_dir': None,
    'output_dir': 'runs',
    'workers': None,             # None -> os.cpu_count()
}

SECTIONS = ('sigma', 'grid', 'lambda_grid', 'noise', 'probes', 'tikhonov', 'eigs', 'trace',
            'forward', 'peaks')


def _merge(base: Dict, update: Dict, path: str = '') -> Dict:
    merged = copy.deepcopy(base)
    for key, value in update.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"Unknown config field: {where}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"Config field {where} must be an object")
            merged[key] = _merge(base[key], value, where + '.')
        else:
            merged[key] = value
    return merged


def _require(condition: bool, message: str):
    if not condition:
        raise ConfigError(message)


def validate(doc: Dict):
    """Range checks on a fully merged document"""
    _require(doc['kappa'] > 0, "kappa must be > 0")
    _require(doc['truncation'] is None or int(doc['truncation']) >= 1, "truncation must be >= 1")

    grid = doc['grid']
    _require(grid['kind'] in ('product-gauss', 'spherical-design'), f"Unknown grid kind: {grid['kind']}")
    if grid['n_polar'] is None or grid['n_azimuth'] is None:
        _require(int(grid['n_dirs']) >= 6, "grid.n_dirs must be >= 6")
    else:
        _require(grid['kind'] == 'product-gauss', "n_polar/n_azimuth apply to product-gauss grids only")

    lam = doc['lambda_grid']
    _require(int(lam['count']) >= 2, "lambda_grid.count must be >= 2")
    _require(lam['min'] < lam['max'], "lambda_grid.min must be below lambda_grid.max")

    noise = doc['noise']
    _require(0 <= noise['level'] < 1, "noise.level must lie in [0, 1)")
    _require(noise['distribution'] in ('unit-square', 'centered'),
             f"Unknown noise distribution: {noise['distribution']}")

    probes = doc['probes']
    _require(int(probes['count']) >= 1, "probes.count must be >= 1")
    _require(0 < probes['r_max'] < 1, "probes.r_max must lie in (0, 1)")

    tik = doc['tikhonov']
    _require(tik['policy'] in ('fixed', 'morozov'), f"Unknown regularization policy: {tik['policy']}")
    _require(tik['rho'] > 0, "tikhonov.rho must be > 0")
    _require(tik['tau'] >= 1, "tikhonov.tau must be >= 1")

    eigs = doc['eigs']
    _require(int(eigs['n_max']) >= 1, "eigs.n_max must be >= 1")
    _require(eigs['re_min'] <= eigs['re_max'] and eigs['im_min'] <= eigs['im_max'], "eigs window is empty")

    trace = doc['trace']
    _require(trace['parameter'] in SIGMA_CONFIG, f"Unknown trace parameter: {trace['parameter']}")
    _require(int(trace['count']) >= 1, "trace.count must be >= 1")

    fwd = doc['forward']
    d = np.asarray(fwd['direction'], dtype=float)
    p = np.asarray(fwd['polarization'], dtype=float)
    _require(d.shape == (3,) and p.shape == (3,), "forward.direction and forward.polarization need 3 entries")
    _require(abs(np.linalg.norm(d) - 1.0) < 1e-12, "forward.direction must be a unit vector")
    _require(abs(np.dot(d, p)) < 1e-12, "forward.polarization must be orthogonal to the direction")

    _require(doc['peaks']['prominence_factor'] > 0, "peaks.prominence_factor must be > 0")
    _require(doc['workers'] is None or int(doc['workers']) >= 1, "workers must be >= 1")


@dataclass(frozen=True)
class RunConfig:
    """Validated run settings; `document` is the merged config, `raw` the user input"""
    document: Dict
    raw: Dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.document[key]

    @property
    def kappa(self) -> float:
        return float(self.document['kappa'])

    @property
    def truncation(self) -> Optional[int]:
        value = self.document['truncation']
        return None if value is None else int(value)

    @property
    def workers(self) -> int:
        value = self.document['workers']
        return int(value) if value is not None else (os.cpu_count() or 1)

    @property
    def cache_dir(self) -> Optional[Path]:
        value = self.document['cache_dir']
        return None if value is None else Path(value)

    @property
    def output_dir(self) -> Path:
        return Path(self.document['output_dir'])

    def sigma(self):
        from .tensor import SurfaceTensor
        return SurfaceTensor.from_dict(self.document['sigma'])

    def grid(self):
        from .farfield import build_grid, product_gauss_grid
        g = self.document['grid']
        if g['n_polar'] is not None and g['n_azimuth'] is not None:
            return product_gauss_grid(int(g['n_polar']), int(g['n_azimuth']),
                                      g['obs_aperture'], g['inc_aperture'])
        return build_grid(int(g['n_dirs']), g['kind'], g['obs_aperture'], g['inc_aperture'])

    def lambdas(self) -> np.ndarray:
        from .inversion import lambda_grid
        lam = self.document['lambda_grid']
        return lambda_grid(lam['min'], lam['max'], int(lam['count']), lam['im'])

    def noise_spec(self):
        from .farfield import NoiseSpec
        n = self.document['noise']
        return NoiseSpec(level=float(n['level']), seed=int(n['seed']), distribution=n['distribution'])

    def probe_set(self):
        from .inversion import sample_probes
        p = self.document['probes']
        return sample_probes(int(p['count']), float(p['r_max']), int(p['seed']))

    def policy(self):
        from .inversion import RegularizationPolicy
        t = self.document['tikhonov']
        return RegularizationPolicy(policy=t['policy'], rho=float(t['rho']), tau=float(t['tau']),
                                    noise_level=float(self.document['noise']['level']))

    def window(self):
        from .eigs import Window
        e = self.document['eigs']
        return Window(e['re_min'], e['re_max'], e['im_min'], e['im_max'])

    def seeds(self) -> Dict[str, int]:
        return {'noise': int(self.document['noise']['seed']), 'probes': int(self.document['probes']['seed'])}

    def to_dict(self) -> Dict:
        return copy.deepcopy(self.document)


def from_document(raw: Dict) -> RunConfig:
    """Merge a user document over the defaults and validate it"""
    merged = _merge(DEFAULTS, raw or {})
    validate(merged)
    return RunConfig(document=merged, raw=copy.deepcopy(raw or {}))


def load_config(path=None) -> RunConfig:
    """
    Load a JSON config file, or the defaults when path is None

    Args:
        path: JSON document path

    Returns:
        RunConfig
    """
    if path is None:
        return from_document({})
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from exc
    return from_document(raw)


def get_preset(preset_name: str) -> RunConfig:
    """Load a shipped preset from data/presets"""
    preset_path = PRESETS_DIR / f"{preset_name}.json"
    if not preset_path.exists():
        raise ConfigError(f"Unknown preset: {preset_name}")
    return load_config(preset_path)


def apply_overrides(config: RunConfig, workers: Optional[int] = None, cache: Optional[str] = None,
                    seed: Optional[int] = None) -> RunConfig:
    """
    Apply CLI overrides: worker count, cache directory, then seeds

    A seed override sets the noise seed to `seed` and the probe seed to `seed + 1`.
    """
    document = config.to_dict()
    if workers is not None:
        document['workers'] = workers
    if cache is not None:
        document['cache_dir'] = str(cache)
    if seed is not None:
        document['noise']['seed'] = int(seed)
        document['probes']['seed'] = int(seed) + 1
    validate(document)
    return replace(config, document=document)
