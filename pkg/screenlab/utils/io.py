"""
File output helpers
Atomic writes, CSV with 17 significant digits, JSON documents and run manifests
"""

import json
import logging
import os
import platform
import tempfile
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def atomic_write_bytes(path: PathLike, payload: bytes):
    """Write to a temporary file in the target directory, then rename"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix='.tmp')
    try:
        with os.fdopen(fd, 'wb') as f:
            f.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: PathLike, text: str):
    atomic_write_bytes(path, text.encode('utf-8'))


def format_float(value: float) -> str:
    return '%.17g' % float(value)


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return '1' if value else '0'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]):
    """
    Write a CSV with '.' decimals, '\\n' newlines and 17-digit floats

    Args:
        path: Output file
        header: Column names
        rows: Row sequences; bools become 0/1
    """
    lines = [','.join(header)]
    lines.extend(','.join(_format_cell(v) for v in row) for row in rows)
    atomic_write_text(path, '\n'.join(lines) + '\n')


def read_csv(path: PathLike) -> Dict[str, List[str]]:
    """Columns of a CSV written by write_csv, as raw strings"""
    with open(path, 'r') as f:
        lines = [line.rstrip('\n') for line in f if line.strip()]
    header = lines[0].split(',')
    columns = {name: [] for name in header}
    for line in lines[1:]:
        for name, cell in zip(header, line.split(',')):
            columns[name].append(cell)
    return columns


def write_json(path: PathLike, document: Dict):
    atomic_write_text(path, json.dumps(document, indent=2, sort_keys=True) + '\n')


def read_json(path: PathLike) -> Dict:
    with open(path, 'r') as f:
        return json.load(f)


def library_versions() -> Dict[str, str]:
    import joblib
    import scipy

    from .. import __version__
    return {
        'screenlab': __version__,
        'numpy': np.__version__,
        'scipy': scipy.__version__,
        'joblib': joblib.__version__,
        'python': platform.python_version(),
    }


def write_manifest(output_dir: PathLike, command: str, config: Dict, seeds: Dict,
                   outputs: List[str], extra: Optional[Dict] = None) -> Path:
    """
    Write manifest.json echoing the configuration verbatim

    The timestamp is the only field that differs between identical runs.
    """
    manifest = {
        'command': command,
        'config': config,
        'seeds': seeds,
        'outputs': sorted(outputs),
        'versions': library_versions(),
        'timestamp': datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        manifest.update(extra)
    path = Path(output_dir) / 'manifest.json'
    write_json(path, manifest)
    logger.debug("Manifest written to %s", path)
    return path


GNUPLOT_TEMPLATES = {
    'indicator': (
        "set datafile separator ','\n"
        "set xlabel 'lambda'\n"
        "set ylabel 'indicator'\n"
        "set logscale y\n"
        "plot '{data}' using 1:3 every ::1 with lines title 'mean |g|'\n"
    ),
    'trace': (
        "set datafile separator ','\n"
        "set xlabel 's'\n"
        "set ylabel 'Re lambda'\n"
        "plot '{data}' using 1:2 every ::1 with points pt 7 title 'eigenvalues'\n"
    ),
}


def write_gnuplot(path: PathLike, kind: str, data_file: str):
    if kind not in GNUPLOT_TEMPLATES:
        raise ValueError(f"Unknown plot kind: {kind}")
    atomic_write_text(path, GNUPLOT_TEMPLATES[kind].format(data=data_file))
