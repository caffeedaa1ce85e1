"""
Peak detection on indicator curves
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np
from scipy.signal import find_peaks, peak_widths

from .indicator import IndicatorCurve

logger = logging.getLogger(__name__)

DEFAULT_PROMINENCE_FACTOR = 2.0


@dataclass
class PeakList:
    locations: np.ndarray
    indices: np.ndarray
    prominences: np.ndarray
    widths: np.ndarray
    interpolated: List[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.locations)

    def to_dict(self) -> Dict:
        return {
            'locations': [[complex(z).real, complex(z).imag] for z in self.locations],
            'indices': [int(i) for i in self.indices],
            'prominences': [float(p) for p in self.prominences],
            'widths': [float(w) for w in self.widths],
            'interpolated': list(self.interpolated),
        }


def _empty(interpolated=None) -> PeakList:
    return PeakList(np.array([], dtype=complex), np.array([], dtype=int), np.array([]), np.array([]),
                    interpolated or [])


def _longest_valid_run(valid: np.ndarray) -> int:
    best = run = 0
    for ok in valid:
        run = run + 1 if ok else 0
        best = max(best, run)
    return best


def detect_peaks(curve: IndicatorCurve, prominence_factor: float = DEFAULT_PROMINENCE_FACTOR) -> PeakList:
    """
    Local maxima with prominence >= prominence_factor · median(indicator)

    Invalid samples are linearly interpolated over and listed in the result.
    Widths are full widths at half prominence in λ units.
    """
    valid = np.asarray(curve.valid, dtype=bool)
    if _longest_valid_run(valid) < 3:
        logger.warning("Indicator curve has fewer than 3 consecutive valid samples")
        return _empty()

    positions = np.arange(len(curve))
    values = np.array(curve.indicator, dtype=float)
    interpolated = [int(i) for i in positions[~valid]]
    if interpolated:
        values[~valid] = np.interp(positions[~valid], positions[valid], values[valid])

    threshold = prominence_factor * float(np.median(values))
    peaks, props = find_peaks(values, prominence=threshold)
    if len(peaks) == 0:
        return _empty(interpolated)

    widths_idx = peak_widths(values, peaks, rel_height=0.5, prominence_data=(
        props['prominences'], props['left_bases'], props['right_bases']))[0]
    lam_re = np.real(curve.lams)
    step = float(np.mean(np.abs(np.diff(lam_re)))) if len(lam_re) > 1 else 0.0
    result = PeakList(
        locations=np.asarray(curve.lams)[peaks],
        indices=peaks,
        prominences=props['prominences'],
        widths=widths_idx * step,
        interpolated=interpolated,
    )
    logger.info("Detected %d peaks at %s", len(result), np.round(np.real(result.locations), 6).tolist())
    return result
