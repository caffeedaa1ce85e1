"""
Output utilities
"""

from .io import (
    atomic_write_bytes,
    atomic_write_text,
    format_float,
    read_csv,
    read_json,
    write_csv,
    write_gnuplot,
    write_json,
    write_manifest,
)

__all__ = [
    'atomic_write_bytes',
    'atomic_write_text',
    'format_float',
    'read_csv',
    'read_json',
    'write_csv',
    'write_gnuplot',
    'write_json',
    'write_manifest',
]
