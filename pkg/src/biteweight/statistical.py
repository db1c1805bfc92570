"""Statistical features f3-f6 from sliding-window analysis of a bite's IMU.

Per 2 s window (0.1 s step) four intermediates are computed: gyroscope
energy E, total variance V, y-gyroscope range R and z-acceleration entropy
S. The bite-level features are skew(E), skew(V), max(R) and min(S).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT_CONFIG, PipelineConfig
from .errors import EmptyBiteError, NoWindowsError
from .model import ImuStream

_GYRO = slice(3, 6)
_GY = 4   # y-axis gyroscope column
_AZ = 2   # z-axis accelerometer column


@dataclass(frozen=True)
class WindowStats:
    energy: float     # sum of squared gyroscope samples, (rad/s)^2 * samples
    variance: float   # sum of per-channel variances (trace of covariance)
    gy_range: float   # max - min of y-gyroscope, rad/s
    entropy: float    # histogram entropy of z-acceleration, nats


def shannon_entropy(x: np.ndarray, bins: int) -> float:
    """Histogram entropy in nats over the sample's own min-max range.

    Degenerate (constant) input has zero entropy; empty bins contribute
    nothing. Bounded by ln(bins).
    """
    lo, hi = float(x.min()), float(x.max())
    if hi <= lo:
        return 0.0
    counts, _ = np.histogram(x, bins=bins, range=(lo, hi))
    p = counts[counts > 0] / x.size
    return float(-(p * np.log(p)).sum())


def window_stats(samples: np.ndarray, entropy_bins: int) -> WindowStats:
    gyro = samples[:, _GYRO]
    return WindowStats(
        energy=float((gyro * gyro).sum()),
        variance=float(np.var(samples, axis=0).sum()),
        gy_range=float(samples[:, _GY].max() - samples[:, _GY].min()),
        entropy=shannon_entropy(samples[:, _AZ], entropy_bins),
    )


def window_spans(n_samples: int, fs: float, window_s: float,
                 step_s: float) -> list[tuple[int, int]]:
    """Start/stop sample indices of the sliding windows.

    A bite shorter than one window yields a single whole-bite window so that
    no annotated bite is dropped.
    """
    wlen = int(round(window_s * fs))
    step = max(1, int(round(step_s * fs)))
    if n_samples < wlen:
        return [(0, n_samples)]
    return [(s, s + wlen) for s in range(0, n_samples - wlen + 1, step)]


def slide_windows(bite: ImuStream,
                  cfg: PipelineConfig = DEFAULT_CONFIG) -> list[WindowStats]:
    """Window statistics over one bite's IMU slice."""
    if bite.n_samples == 0:
        raise EmptyBiteError("bite slice holds no IMU samples")
    return [
        window_stats(bite.values[s:e], cfg.entropy_bins)
        for s, e in window_spans(bite.n_samples, bite.fs, cfg.stat_window_s, cfg.stat_step_s)
    ]


def skewness(series: np.ndarray) -> float:
    """Biased moment skewness g1 = m3 / m2^(3/2); 0 for constant series."""
    x = np.asarray(series, dtype=float)
    m = x.mean()
    m2 = ((x - m) ** 2).mean()
    if m2 <= 1e-12:
        return 0.0
    m3 = ((x - m) ** 3).mean()
    return float(m3 / m2 ** 1.5)


def aggregate_stat_features(stats: Sequence[WindowStats]) -> tuple[float, float, float, float]:
    """(f3, f4, f5, f6) from the window series."""
    if not stats:
        raise NoWindowsError("no window statistics to aggregate")
    e = np.array([s.energy for s in stats])
    v = np.array([s.variance for s in stats])
    r = np.array([s.gy_range for s in stats])
    ent = np.array([s.entropy for s in stats])
    return skewness(e), skewness(v), float(r.max()), float(ent.min())


def statistical_features(bite: ImuStream,
                         cfg: PipelineConfig = DEFAULT_CONFIG) -> tuple[float, float, float, float]:
    return aggregate_stat_features(slide_windows(bite, cfg))
