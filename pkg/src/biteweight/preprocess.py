"""Signal conditioning: resampling, gravity removal, despiking, hand mirroring.

The chain order is fixed: linear resampling to a uniform grid, zero-phase
high-pass on the accelerometer channels, median despiking of all channels,
then mirroring of left-wrist recordings into right-wrist orientation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import signal

from .config import DEFAULT_CONFIG, PipelineConfig
from .errors import (
    AlreadyRightWarning,
    InvalidOrderError,
    InvalidParamsError,
    StreamTooShortError,
    TooFewSamplesError,
)
from .model import ACCEL_CHANNELS, CHANNELS, ImuStream, Session, Wrist

#: Channels flipped when mirroring a left-wrist recording (ax, gy, gz).
MIRROR_CHANNELS = (0, 4, 5)


@dataclass(frozen=True)
class FirFilter:
    """Linear-phase FIR high-pass used for gravity removal."""

    taps: np.ndarray
    cutoff_hz: float
    fs: float

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=float)
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def num_taps(self) -> int:
        return self.taps.shape[0]

    def gain_at(self, freq_hz: float) -> float:
        """Magnitude response |H(f)| of the single (one-pass) filter."""
        n = np.arange(self.num_taps)
        return float(abs(np.sum(self.taps * np.exp(-2j * np.pi * freq_hz / self.fs * n))))

    def validate(self) -> None:
        """Check the design contract: odd symmetric taps, no DC leakage,
        and unit gain well above the cutoff."""
        if self.num_taps % 2 != 1:
            raise InvalidParamsError(f"tap count must be odd, got {self.num_taps}")
        if not np.allclose(self.taps, self.taps[::-1], atol=1e-12, rtol=0):
            raise InvalidParamsError("taps must be symmetric (linear phase)")
        dc = abs(float(self.taps.sum()))
        if dc > 1e-6:
            raise InvalidParamsError(f"DC gain {dc:.2e} exceeds 1e-6")
        if self.fs / 2 > 10.0:
            g = self.gain_at(10.0)
            if not (0.99 <= g <= 1.01):
                raise InvalidParamsError(f"gain at 10 Hz is {g:.4f}, outside [0.99, 1.01]")


def design_highpass(cutoff_hz: float, num_taps: int, fs: float) -> FirFilter:
    """Design a windowed-sinc high-pass by spectral inversion.

    A Hamming-windowed low-pass is normalized to unit DC gain and inverted
    (negate, add a unit impulse at the center tap), which forces the DC gain
    of the high-pass to zero exactly.
    """
    if num_taps % 2 != 1 or num_taps < 3:
        raise InvalidParamsError(f"tap count must be odd and >= 3, got {num_taps}")
    if not (0 < cutoff_hz < fs / 2):
        raise InvalidParamsError(
            f"cutoff must lie in (0, fs/2) = (0, {fs / 2}), got {cutoff_hz}"
        )
    mid = (num_taps - 1) // 2
    n = np.arange(num_taps) - mid
    lowpass = 2 * cutoff_hz / fs * np.sinc(2 * cutoff_hz / fs * n)
    lowpass *= np.hamming(num_taps)
    lowpass /= lowpass.sum()
    taps = -lowpass
    taps[mid] += 1.0
    return FirFilter(taps=taps, cutoff_hz=cutoff_hz, fs=fs)


def resample_linear(stream: ImuStream, target_hz: float) -> ImuStream:
    """Resample onto a uniform grid from first to last input time.

    Each output value is the linear interpolation of its bracketing input
    samples, so piecewise-linear inputs with breakpoints on input samples
    are reproduced exactly.
    """
    if target_hz <= 0:
        raise InvalidParamsError(f"target rate must be positive, got {target_hz}")
    if stream.n_samples < 2:
        raise TooFewSamplesError(
            f"resampling needs at least 2 samples, got {stream.n_samples}"
        )
    t0, t1 = float(stream.t[0]), float(stream.t[-1])
    n_out = int(np.floor((t1 - t0) * target_hz + 1e-6)) + 1
    grid = t0 + np.arange(n_out) / target_hz
    out = np.empty((n_out, 6))
    for c in range(6):
        out[:, c] = np.interp(grid, stream.t, stream.values[:, c])
    return ImuStream(t=grid, values=out, fs=target_hz, wrist=stream.wrist)


def filtfilt(filt: FirFilter, stream: ImuStream,
             channels: Sequence[str] = ACCEL_CHANNELS) -> ImuStream:
    """Apply the FIR forward and backward over the selected channels.

    Zero phase by construction; edges are handled by odd-reflection padding
    of length 3*(num_taps - 1), trimmed after filtering. The other channels
    pass through untouched.
    """
    edge = 3 * (filt.num_taps - 1)
    if stream.n_samples <= edge:
        raise StreamTooShortError(
            f"stream of {stream.n_samples} samples is too short for "
            f"{filt.num_taps} taps (needs > {edge})"
        )
    idx = [CHANNELS.index(c) for c in channels]
    values = stream.values.copy()
    values[:, idx] = signal.filtfilt(
        filt.taps, [1.0], stream.values[:, idx], axis=0, padtype="odd", padlen=edge
    )
    return stream.with_values(values)


def median_filter(stream: ImuStream, order: int = 5) -> ImuStream:
    """Replace each value by the median of its centered window.

    Windows shrink at the stream edges instead of padding, so the output
    range never leaves the input range per channel.
    """
    if order % 2 != 1 or order < 1:
        raise InvalidOrderError(f"median order must be odd and >= 1, got {order}")
    n = stream.n_samples
    x = stream.values
    half = order // 2
    out = np.empty_like(x)
    if n >= order:
        windows = np.lib.stride_tricks.sliding_window_view(x, order, axis=0)
        out[half:n - half] = np.median(windows, axis=-1)
    for i in list(range(min(half, n))) + list(range(max(n - half, 0), n)):
        out[i] = np.median(x[max(0, i - half):i + half + 1], axis=0)
    return stream.with_values(out)


def mirror_hand(stream: ImuStream) -> ImuStream:
    """Map a left-wrist recording into right-wrist orientation.

    Negates ax, gy and gz. Calling it on a stream already in right-wrist
    orientation is a no-op that emits ``AlreadyRightWarning``.
    """
    if stream.wrist is Wrist.RIGHT:
        warnings.warn("stream already in right-wrist orientation", AlreadyRightWarning)
        return stream
    values = stream.values.copy()
    values[:, MIRROR_CHANNELS] *= -1.0
    return stream.with_values(values, wrist=Wrist.RIGHT)


def preprocess_stream(stream: ImuStream,
                      cfg: PipelineConfig = DEFAULT_CONFIG) -> ImuStream:
    """Run the full conditioning chain on one stream."""
    out = resample_linear(stream, cfg.target_hz)
    hp = design_highpass(cfg.fir_cutoff_hz, cfg.fir_taps, cfg.target_hz)
    out = filtfilt(hp, out, channels=ACCEL_CHANNELS)
    out = median_filter(out, cfg.median_order)
    if out.wrist is Wrist.LEFT:
        out = mirror_hand(out)
    return out


def preprocess_session(session: Session,
                       cfg: PipelineConfig = DEFAULT_CONFIG) -> Session:
    """Return the session with its IMU stream fully conditioned."""
    return Session(
        subject_id=session.subject_id,
        session_id=session.session_id,
        imu=preprocess_stream(session.imu, cfg),
        micromovements=session.micromovements,
        bites=session.bites,
        sync_offset_s=session.sync_offset_s,
    )
