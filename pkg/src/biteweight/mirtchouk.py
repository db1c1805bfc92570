"""Adapted comparison pipeline: 28 per-window features aggregated to a
56-dimensional per-bite vector (mean then std of each window feature).

Windows are 5 s with 0.1 s step; bites shorter than one window use a single
whole-bite window. Per window: 11 statistical values (channel means, grouped
variances, mean absolute derivatives of the accel/gyro magnitudes and their
covariance), 15 shape values (degree-4 polynomial fits of the three
acceleration channels over normalized time) and 2 frequency values (mean and
std of the per-channel zero-crossing rate).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .config import DEFAULT_CONFIG, PipelineConfig
from .errors import EmptyBiteError, NoWindowsError
from .model import BiteSlice, ImuStream
from .statistical import window_spans

N_WINDOW_FEATURES = 28
N_BITE_FEATURES = 56


def polynomial_fit(y: np.ndarray, degree: int) -> np.ndarray:
    """Least-squares polynomial coefficients (ascending) on time in [0, 1]."""
    n = y.shape[0]
    if n == 1:
        out = np.zeros(degree + 1)
        out[0] = y[0]
        return out
    tau = np.arange(n) / (n - 1)
    vand = np.vander(tau, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(vand, y, rcond=None)
    return coef


def zero_crossing_rate(x: np.ndarray) -> float:
    """Sign changes per sample step; exact zeros do not count as crossings."""
    if x.shape[0] < 2:
        return 0.0
    s = np.sign(x)
    return float(np.count_nonzero(s[1:] * s[:-1] < 0) / (x.shape[0] - 1))


def window_features(samples: np.ndarray, degree: int = 4) -> np.ndarray:
    """The 28 features of one window (11 statistical, 15 shape, 2 frequency)."""
    accel = samples[:, :3]
    gyro = samples[:, 3:]
    accel_mag = np.linalg.norm(accel, axis=1)
    gyro_mag = np.linalg.norm(gyro, axis=1)

    def mean_abs_diff(x: np.ndarray) -> float:
        return float(np.abs(np.diff(x)).mean()) if x.shape[0] > 1 else 0.0

    stat = np.array([
        *samples.mean(axis=0),
        float(np.var(accel, axis=0).sum()),
        float(np.var(gyro, axis=0).sum()),
        mean_abs_diff(accel_mag),
        mean_abs_diff(gyro_mag),
        float(np.mean((accel_mag - accel_mag.mean()) * (gyro_mag - gyro_mag.mean()))),
    ])
    shape = np.concatenate([polynomial_fit(accel[:, c], degree) for c in range(3)])
    zcr = np.array([zero_crossing_rate(samples[:, c]) for c in range(6)])
    freq = np.array([zcr.mean(), zcr.std()])
    return np.concatenate([stat, shape, freq])


def mirtchouk_windows(bite: ImuStream,
                      cfg: PipelineConfig = DEFAULT_CONFIG) -> np.ndarray:
    """(n_windows, 28) feature matrix over the bite's sliding windows."""
    if bite.n_samples == 0:
        raise EmptyBiteError("bite slice holds no IMU samples")
    spans = window_spans(bite.n_samples, bite.fs,
                         cfg.mirtchouk_window_s, cfg.mirtchouk_step_s)
    return np.array([window_features(bite.values[s:e], cfg.poly_degree)
                     for s, e in spans])


def mirtchouk_bite_vector(windows: np.ndarray) -> np.ndarray:
    """56-vector: the 28 window-feature means followed by their stds."""
    if windows.ndim != 2 or windows.shape[0] == 0:
        raise NoWindowsError("need at least one window of features")
    return np.concatenate([windows.mean(axis=0), windows.std(axis=0)])


def mirtchouk_features(bite: ImuStream,
                       cfg: PipelineConfig = DEFAULT_CONFIG) -> np.ndarray:
    return mirtchouk_bite_vector(mirtchouk_windows(bite, cfg))


class MirtchoukFeatureExtractor(TransformerMixin, BaseEstimator):
    """Transformer form: sequence of bite slices -> (n, 56) matrix."""

    def __init__(self, cfg: PipelineConfig = DEFAULT_CONFIG):
        self.cfg = cfg

    def fit(self, X: Sequence[BiteSlice], y=None):
        return self

    def transform(self, X: Sequence[BiteSlice]) -> np.ndarray:
        return np.array([mirtchouk_features(b.imu, self.cfg) for b in X])
