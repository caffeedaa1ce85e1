"""
FFO1 binary matrices, JSON sidecars and the on-disk F^(λ) cache

Layout: b"FFO1", u32 rows, u32 cols (little-endian), then row-major
entries as little-endian float64 pairs (re, im).
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import GridMismatchError
from ..utils.io import atomic_write_bytes, read_json, write_json
from .grid import DirectionGrid, grid_from_signature
from .operators import FarFieldMatrix, ModeProjector, assemble_F_lambda

logger = logging.getLogger(__name__)

MAGIC = b'FFO1'
HEADER_SIZE = 12

PathLike = Union[str, Path]


def encode_ffo1(entries: np.ndarray) -> bytes:
    rows, cols = entries.shape
    header = MAGIC + np.array([rows, cols], dtype='<u4').tobytes()
    return header + np.ascontiguousarray(entries, dtype='<c16').tobytes()


def decode_ffo1(payload: bytes) -> np.ndarray:
    if payload[:4] != MAGIC:
        raise ValueError(f"Not an FFO1 file (magic {payload[:4]!r})")
    rows, cols = np.frombuffer(payload[4:HEADER_SIZE], dtype='<u4')
    expected = HEADER_SIZE + 16 * int(rows) * int(cols)
    if len(payload) != expected:
        raise ValueError(f"FFO1 size {len(payload)} does not match {rows}x{cols}")
    data = np.frombuffer(payload[HEADER_SIZE:], dtype='<c16')
    return data.reshape(int(rows), int(cols)).astype(complex)


def sidecar_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_suffix(path.suffix + '.json')


def save_matrix(M: FarFieldMatrix, path: PathLike) -> Path:
    """Write the FFO1 file and its sidecar atomically"""
    path = Path(path)
    atomic_write_bytes(path, encode_ffo1(M.entries))
    write_json(sidecar_path(path), M.sidecar())
    logger.debug("Saved %s matrix %s to %s", M.kind, M.shape, path)
    return path


def load_matrix(path: PathLike, grid: Optional[DirectionGrid] = None) -> FarFieldMatrix:
    """
    Read an FFO1 file and its sidecar

    Args:
        path: FFO1 file
        grid: Expected grid; rebuilt from the sidecar when omitted

    Returns:
        FarFieldMatrix
    """
    path = Path(path)
    entries = decode_ffo1(path.read_bytes())
    meta = read_json(sidecar_path(path))
    stored = grid_from_signature(meta['grid'])
    if grid is None:
        grid = stored
    elif not grid.same_as(stored):
        raise GridMismatchError(f"Matrix {path} was stored for a different grid")
    lam = meta.get('lambda')
    known = {'kind', 'kappa', 'n_max', 'lambda', 'sigma', 'grid', 'rows', 'cols'}
    return FarFieldMatrix(
        grid=grid,
        entries=entries,
        kind=meta['kind'],
        kappa=meta['kappa'],
        n_max=meta['n_max'],
        lam=None if lam is None else complex(lam[0], lam[1]),
        sigma=meta.get('sigma'),
        metadata={k: v for k, v in meta.items() if k not in known},
    )


class LambdaCache:
    """
    Directory of F^(λ) matrices keyed by grid, κ, truncation and λ

    Keys are SHA-1 digests of a canonical JSON document, so equal
    settings always hit the same file.
    """

    def __init__(self, cache_dir: PathLike):
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(grid: DirectionGrid, kappa: float, n_max: int, lam: complex) -> str:
        lam = complex(lam)
        document = {
            'grid': grid.signature(),
            'kappa': float(kappa).hex(),
            'n_max': int(n_max),
            'lambda': [lam.real.hex(), lam.imag.hex()],
        }
        canonical = json.dumps(document, sort_keys=True, separators=(',', ':'))
        return hashlib.sha1(canonical.encode('utf-8')).hexdigest()

    def path_for(self, grid: DirectionGrid, kappa: float, n_max: int, lam: complex) -> Path:
        return self.cache_dir / f"F_lambda_{self.key(grid, kappa, n_max, lam)}.ffo1"

    def get_or_assemble(self, lam: complex, kappa: float, grid: DirectionGrid, n_max: int,
                        projector: Optional[ModeProjector] = None) -> Tuple[FarFieldMatrix, bool]:
        """
        Load F^(λ) when cached, otherwise assemble and store it

        Returns:
            (matrix, hit)
        """
        path = self.path_for(grid, kappa, n_max, lam)
        if path.exists():
            self.hits += 1
            return load_matrix(path, grid), True
        self.misses += 1
        M = assemble_F_lambda(lam, kappa, grid, n_max, projector)
        save_matrix(M, path)
        return M, False
