"""
Command-line front end
Each sub-command writes its files to the output directory and prints a JSON
summary on stdout; status lines go to stderr.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List

import numpy as np

from .config import RunConfig, apply_overrides, get_preset, load_config
from .eigs import eigenvalue_trace, eigenvalues_in_window, tensor_family, trace_rows
from .errors import ScreenLabError
from .farfield import (
    LambdaCache,
    add_noise,
    assemble_F,
    assemble_F_lambda,
    numerical_rank,
    relative_error,
    save_matrix,
)
from .inversion import IndicatorCurve, detect_peaks, scan_indicator
from .scattering import PlaneWave, far_field, solve_forward
from .tensor import check_existence
from .utils.io import write_csv, write_gnuplot, write_json, write_manifest

logger = logging.getLogger(__name__)


def status(message: str):
    print(message, file=sys.stderr)


def _output_dir(config: RunConfig, args) -> Path:
    out = Path(args.output) if args.output else config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    return out


def handle_check_tensor(config: RunConfig, args) -> Dict:
    report = check_existence(config.sigma())
    if report.admissible:
        status("✅ Tensor is admissible")
    else:
        status("⚠️  Tensor is not admissible")
    return {'sigma': config['sigma'], **report.to_dict(), 'admissible': report.admissible}


def handle_eigs(config: RunConfig, args) -> Dict:
    out = _output_dir(config, args)
    eigs = eigenvalues_in_window(config.kappa, config.sigma(), config.window(),
                                 int(config['eigs']['n_max']), config.workers)
    document = eigs.to_dict()
    write_json(out / 'eigs.json', document)
    write_manifest(out, 'eigs', config.raw, config.seeds(), ['eigs.json'])
    status(f"✅ {len(eigs.distinct())} distinct eigenvalues written to {out / 'eigs.json'}")
    return {'eigenvalues': document['eigenvalues'], 'degenerate_degrees': eigs.degenerate,
            'tail_ok': eigs.tail_ok}


def handle_trace(config: RunConfig, args) -> Dict:
    out = _output_dir(config, args)
    t = config['trace']
    s_values = np.linspace(t['s_min'], t['s_max'], int(t['count']))
    family = tensor_family(config.sigma(), t['parameter'])
    trace = eigenvalue_trace(config.kappa, family, s_values, config.window(),
                             int(config['eigs']['n_max']), config.workers)
    rows = trace_rows(trace)
    write_csv(out / 'trace.csv', ['s', 'lambda_re', 'lambda_im', 'n', 'family', 'multiplicity'], rows)
    outputs = ['trace.csv']
    if args.gnuplot:
        write_gnuplot(out / 'trace.gp', 'trace', 'trace.csv')
        outputs.append('trace.gp')
    write_manifest(out, 'trace', config.raw, config.seeds(), outputs)
    status(f"✅ Traced {len(s_values)} tensors over {t['parameter']}")
    return {'parameter': t['parameter'], 'samples': len(s_values), 'rows': len(rows)}


def handle_forward(config: RunConfig, args) -> Dict:
    out = _output_dir(config, args)
    fwd = config['forward']
    wave = PlaneWave(tuple(fwd['direction']), tuple(fwd['polarization']), config.kappa)
    expansion = solve_forward(wave, config.sigma(), config.truncation, config.workers)
    grid = config.grid()
    receivers = grid.receivers
    pattern = far_field(expansion, receivers.nodes)
    rows = [[i, *x, *np.real(e), *np.imag(e)] for i, x, e in zip(receivers.indices, receivers.nodes, pattern)]
    header = ['node', 'x', 'y', 'z', 'ex_re', 'ey_re', 'ez_re', 'ex_im', 'ey_im', 'ez_im']
    write_csv(out / 'farfield.csv', header, rows)
    expansion.save(out / 'expansion.json')
    write_manifest(out, 'forward', config.raw, config.seeds(), ['farfield.csv', 'expansion.json'])
    status(f"✅ Far field sampled at {len(receivers)} directions")
    return {'n_max': expansion.n_max, 'directions': len(receivers),
            'max_amplitude': float(np.max(np.linalg.norm(pattern, axis=1)))}


def handle_faroperator(config: RunConfig, args) -> Dict:
    out = _output_dir(config, args)
    grid = config.grid()
    if args.aux is not None:
        lam = complex(args.aux)
        M = assemble_F_lambda(lam, config.kappa, grid, config.truncation)
        name = 'F_lambda.ffo1'
    else:
        M = assemble_F(config.sigma(), config.kappa, grid, config.truncation, config.workers)
        name = 'F.ffo1'
        if args.noise:
            clean = M
            M = add_noise(clean, config.noise_spec())
            name = 'F_noisy.ffo1'
            status(f"🔧 Relative noise {relative_error(M, clean):.6g}")
    save_matrix(M, out / name)
    rank = numerical_rank(M) if M.norm() > 0 else 0
    write_manifest(out, 'faroperator', config.raw, config.seeds(), [name, name + '.json'])
    status(f"✅ {M.kind} matrix {M.shape[0]}x{M.shape[1]} written to {out / name}")
    return {'file': str(out / name), 'kind': M.kind, 'rows': M.shape[0], 'cols': M.shape[1],
            'norm': M.norm(), 'numerical_rank': rank}


def handle_scan(config: RunConfig, args) -> Dict:
    out = _output_dir(config, args)
    grid = config.grid()
    sigma = config.sigma()
    status(f"⏳ Assembling F on {len(grid)} directions")
    F = assemble_F(sigma, config.kappa, grid, config.truncation, config.workers)
    F_data = add_noise(F, config.noise_spec())
    probes = config.probe_set()
    cache = LambdaCache(config.cache_dir) if config.cache_dir else None
    lams = config.lambdas()

    curve = scan_indicator(F_data, lams, probes, policy=config.policy(), n_jobs=config.workers,
                           cache=cache, modified=not args.unmodified, progress=not args.quiet)
    peaks = detect_peaks(curve, float(config['peaks']['prominence_factor']))

    curve.save_csv(out / 'indicator.csv')
    write_json(out / 'peaks.json', peaks.to_dict())
    outputs = ['indicator.csv', 'peaks.json']
    if args.gnuplot:
        write_gnuplot(out / 'indicator.gp', 'indicator', 'indicator.csv')
        outputs.append('indicator.gp')
    extra = {'curve': curve.to_dict()}
    if cache is not None:
        extra['cache'] = {'hits': cache.hits, 'misses': cache.misses}
    write_manifest(out, 'scan', config.raw, config.seeds(), outputs, extra)

    if curve.valid.any():
        spread = float(np.nanmax(curve.indicator) / np.nanmedian(curve.indicator))
        logger.info("Peak-to-median indicator ratio %.3g (modified=%s)", spread, curve.modified)
    status(f"✅ Scanned {len(curve)} lambda samples, {len(peaks)} peaks")
    return {'peaks': peaks.to_dict(), 'invalid': curve.n_invalid, 'modified': curve.modified}


def handle_peaks(config: RunConfig, args) -> Dict:
    source = Path(args.input) if args.input else config.output_dir / 'indicator.csv'
    curve = IndicatorCurve.from_csv(source)
    peaks = detect_peaks(curve, float(config['peaks']['prominence_factor']))
    target = source.parent / 'peaks.json'
    write_json(target, peaks.to_dict())
    status(f"✅ {len(peaks)} peaks written to {target}")
    return peaks.to_dict()


HANDLERS = {
    'check-tensor': handle_check_tensor,
    'eigs': handle_eigs,
    'trace': handle_trace,
    'forward': handle_forward,
    'faroperator': handle_faroperator,
    'scan': handle_scan,
    'peaks': handle_peaks,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='screenlab',
                                     description='Spectral inverse scattering by a spherical impedance screen')
    parser.add_argument('command', choices=sorted(HANDLERS), help='Command to run')
    source = parser.add_mutually_exclusive_group()
    source.add_argument('--config', help='JSON config document')
    source.add_argument('--preset', help='Shipped preset name (data/presets)')
    parser.add_argument('--workers', type=int, help='Worker threads (default: all cores)')
    parser.add_argument('--cache', help='Directory for cached F^(lambda) matrices')
    parser.add_argument('--seed-override', type=int, help='Noise seed; probes use seed + 1')
    parser.add_argument('--output', help='Output directory (default from config)')
    parser.add_argument('--aux', help='faroperator: assemble F^(lambda) for this lambda')
    parser.add_argument('--noise', action='store_true', help='faroperator: add configured noise to F')
    parser.add_argument('--unmodified', action='store_true', help='scan: use F alone (negative control)')
    parser.add_argument('--gnuplot', action='store_true', help='Also write a gnuplot script')
    parser.add_argument('--input', help='peaks: indicator CSV to analyse')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true')
    verbosity.add_argument('-q', '--quiet', action='store_true')
    return parser


def configure_logging(verbose: bool, quiet: bool):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def main(argv: List[str] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    try:
        config = get_preset(args.preset) if args.preset else load_config(args.config)
        config = apply_overrides(config, workers=args.workers, cache=args.cache, seed=args.seed_override)
        result = HANDLERS[args.command](config, args)
        print(json.dumps(result, sort_keys=True))
        return 0
    except ScreenLabError as e:
        status(f"❌ {e}")
        print(json.dumps({'error': str(e), 'type': type(e).__name__}))
        return 2


if __name__ == '__main__':
    sys.exit(main())
