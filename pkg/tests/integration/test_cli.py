"""
End-to-end runs of the command-line front end on small configurations
"""

import json

import numpy as np
import pytest

from screenlab.cli import main
from screenlab.farfield import load_matrix

SMALL_RUN = {
    'grid': {'n_dirs': 24},
    'truncation': 5,
    'lambda_grid': {'min': -0.5, 'max': 1.0, 'count': 11},
    'probes': {'count': 3},
    'workers': 1,
}


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / 'small.json'
    path.write_text(json.dumps(SMALL_RUN))
    return path


def _run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_check_tensor(capsys):
    code, result = _run(capsys, 'check-tensor', '-q')
    assert code == 0
    assert result['admissible']
    assert result['sigma'] == {'a_re': 0.0, 'a_im': 0.5, 'b_re': 0.0, 'b_im': 0.0}


def test_eigs_writes_json(capsys, tmp_path):
    code, result = _run(capsys, 'eigs', '--preset', 'sphere_signatures', '--output', str(tmp_path), '-q')
    assert code == 0
    assert [e['n'] for e in result['eigenvalues']] == [1, 2, 3]
    written = json.loads((tmp_path / 'eigs.json').read_text())
    assert written['eigenvalues'] == result['eigenvalues']
    manifest = json.loads((tmp_path / 'manifest.json').read_text())
    assert manifest['command'] == 'eigs'
    assert manifest['config']['eigs']['re_min'] == -5.0


def test_faroperator_files(capsys, tmp_path, small_config):
    code, result = _run(capsys, 'faroperator', '--config', str(small_config), '--output', str(tmp_path), '-q')
    assert code == 0
    assert (result['rows'], result['cols']) == (48, 48)
    F = load_matrix(tmp_path / 'F.ffo1')
    assert F.kind == 'F'

    code, result = _run(capsys, 'faroperator', '--config', str(small_config), '--output', str(tmp_path),
                        '--aux', '0.25', '-q')
    assert code == 0
    assert load_matrix(tmp_path / 'F_lambda.ffo1').lam == 0.25


def test_scan_is_deterministic(capsys, tmp_path, small_config):
    first, second = tmp_path / 'first', tmp_path / 'second'
    for out in (first, second):
        code, result = _run(capsys, 'scan', '--config', str(small_config), '--output', str(out), '-q')
        assert code == 0
        assert result['invalid'] == 0
    assert (first / 'indicator.csv').read_text() == (second / 'indicator.csv').read_text()
    assert (first / 'peaks.json').read_text() == (second / 'peaks.json').read_text()
    manifest = json.loads((first / 'manifest.json').read_text())
    assert manifest['outputs'] == ['indicator.csv', 'peaks.json']
    assert manifest['seeds'] == {'noise': 20240601, 'probes': 20240602}


def test_seed_override_changes_the_curve(capsys, tmp_path, small_config):
    base, shifted = tmp_path / 'base', tmp_path / 'shifted'
    _run(capsys, 'scan', '--config', str(small_config), '--output', str(base), '-q')
    _run(capsys, 'scan', '--config', str(small_config), '--output', str(shifted), '--seed-override', '5', '-q')
    assert (base / 'indicator.csv').read_text() != (shifted / 'indicator.csv').read_text()
    assert json.loads((shifted / 'manifest.json').read_text())['seeds'] == {'noise': 5, 'probes': 6}


def test_unmodified_scan_and_peaks(capsys, tmp_path, small_config):
    code, result = _run(capsys, 'scan', '--config', str(small_config), '--output', str(tmp_path),
                        '--unmodified', '--gnuplot', '-q')
    assert code == 0
    assert not result['modified']
    assert result['peaks']['locations'] == []
    assert (tmp_path / 'indicator.gp').exists()

    code, result = _run(capsys, 'peaks', '--config', str(small_config), '--input', str(tmp_path / 'indicator.csv'),
                        '-q')
    assert code == 0
    assert result['indices'] == []


def test_cached_scan_reports_hits(capsys, tmp_path, small_config):
    cache = tmp_path / 'cache'
    for out in ('cold', 'warm'):
        _run(capsys, 'scan', '--config', str(small_config), '--output', str(tmp_path / out),
             '--cache', str(cache), '-q')
    warm = json.loads((tmp_path / 'warm' / 'manifest.json').read_text())
    assert warm['cache'] == {'hits': 11, 'misses': 0}
    np.testing.assert_array_equal(
        np.loadtxt(tmp_path / 'cold' / 'indicator.csv', delimiter=',', skiprows=1),
        np.loadtxt(tmp_path / 'warm' / 'indicator.csv', delimiter=',', skiprows=1))


def test_errors_exit_with_json(capsys, tmp_path):
    code, result = _run(capsys, 'eigs', '--config', str(tmp_path / 'missing.json'), '-q')
    assert code == 2
    assert result['type'] == 'ConfigError'
    bad = tmp_path / 'bad.json'
    bad.write_text(json.dumps({'grid': {'n_dirs': 97}}))
    code, result = _run(capsys, 'faroperator', '--config', str(bad), '--output', str(tmp_path), '-q')
    assert code == 2
    assert result['type'] == 'UnsupportedGridError'
