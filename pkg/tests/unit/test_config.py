"""
Config defaults, presets, validation and CLI overrides
"""

import json

import pytest

from screenlab.config import DEFAULTS, apply_overrides, from_document, get_preset, load_config
from screenlab.errors import ConfigError
from screenlab.tensor import SurfaceTensor


def test_defaults():
    config = load_config()
    assert config.kappa == 1.9
    assert config.sigma() == SurfaceTensor(a=0.5j)
    assert len(config.grid().full) == 96
    assert len(config.lambdas()) == 501
    assert config.truncation is None
    assert config.policy().rho == 1e-10
    assert config.window().re_min == -0.5


@pytest.mark.parametrize('name', ['unit_sphere', 'sphere_signatures', 'hemisphere_aperture'])
def test_presets_load(name):
    config = get_preset(name)
    assert config.kappa == 1.9
    assert config.grid().n_inc > 0


def test_hemisphere_preset_restricts_receivers():
    grid = get_preset('hemisphere_aperture').grid()
    assert grid.n_obs == 48
    assert grid.n_inc == 48


def test_unknown_preset():
    with pytest.raises(ConfigError):
        get_preset('missing')


def test_partial_sections_keep_defaults():
    config = from_document({'grid': {'n_dirs': 24}, 'probes': {'count': 3}})
    assert len(config.grid().full) == 24
    assert config['grid']['kind'] == 'product-gauss'
    assert config['probes']['r_max'] == 0.6
    assert DEFAULTS['grid']['n_dirs'] == 96


@pytest.mark.parametrize('raw', [
    {'kappa_typo': 1.0},
    {'grid': {'spacing': 3}},
    {'sigma': 0.5},
])
def test_unknown_fields_rejected(raw):
    with pytest.raises(ConfigError):
        from_document(raw)


@pytest.mark.parametrize('raw', [
    {'kappa': -1.0},
    {'noise': {'level': 1.5}},
    {'probes': {'r_max': 1.0}},
    {'lambda_grid': {'min': 1.0, 'max': 0.0}},
    {'tikhonov': {'policy': 'gcv'}},
    {'forward': {'direction': [0.0, 0.0, 1.0], 'polarization': [0.0, 0.0, 1.0]}},
    {'grid': {'kind': 'spherical-design', 'n_polar': 4, 'n_azimuth': 6}},
])
def test_out_of_range_values_rejected(raw):
    with pytest.raises(ConfigError):
        from_document(raw)


def test_overrides():
    config = apply_overrides(load_config(), workers=3, cache='cache-dir', seed=10)
    assert config.workers == 3
    assert str(config.cache_dir) == 'cache-dir'
    assert config.seeds() == {'noise': 10, 'probes': 11}
    assert load_config().seeds()['noise'] == 20240601
    with pytest.raises(ConfigError):
        apply_overrides(load_config(), workers=0)


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / 'absent.json')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"kappa": ')
    with pytest.raises(ConfigError):
        load_config(broken)
    good = tmp_path / 'good.json'
    good.write_text(json.dumps({'kappa': 2.5}))
    assert load_config(good).kappa == 2.5
