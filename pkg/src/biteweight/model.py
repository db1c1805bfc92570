"""Domain types: IMU streams, micromovement windows, bite annotations,
sessions, and per-bite slicing.

All types are immutable after construction (arrays are marked read-only),
so instances can be shared freely across parallel workers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvariantViolation, UnknownBiteError

#: Column order of the 6-channel IMU matrix.
CHANNELS = ("ax", "ay", "az", "gx", "gy", "gz")
ACCEL_CHANNELS = ("ax", "ay", "az")
GYRO_CHANNELS = ("gx", "gy", "gz")

#: Micromovement class order used everywhere: pick-food, upward, mouth,
#: downward, no-movement.
MICRO_CLASSES = ("p", "u", "m", "d", "n")
P_IDX, U_IDX, M_IDX, D_IDX, N_IDX = range(5)

#: Geometry of the upstream classifier's windows.
MICRO_WINDOW_S = 0.2
MICRO_STEP_S = 0.1

#: Slack used for closed-interval time comparisons on float grids.
TIME_EPS = 1e-9


class Wrist(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class ImuSample(NamedTuple):
    t: float
    ax: float
    ay: float
    az: float
    gx: float
    gy: float
    gz: float


def _readonly(arr: np.ndarray, dtype=float) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ImuStream:
    """Time-stamped 6-channel inertial recording.

    Parameters
    ----------
    t : (N,) array of sample times in seconds, strictly increasing.
    values : (N, 6) array ordered as ``CHANNELS``.
    fs : nominal sampling rate in Hz (exact after resampling).
    wrist : which wrist the stream is expressed in.
    """

    t: np.ndarray
    values: np.ndarray
    fs: float
    wrist: Wrist

    def __post_init__(self):
        t = _readonly(np.atleast_1d(self.t))
        values = _readonly(np.atleast_2d(self.values))
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", values)
        if t.ndim != 1 or values.ndim != 2 or values.shape != (t.shape[0], 6):
            raise InvariantViolation(
                f"IMU stream shape mismatch: t {t.shape}, values {values.shape}"
            )
        if not np.isfinite(values).all():
            raise InvariantViolation("IMU channel values must be finite")
        if not np.isfinite(t).all():
            raise InvariantViolation("IMU sample times must be finite")
        if t.size and t[0] < -TIME_EPS:
            raise InvariantViolation(f"IMU sample times must be non-negative, got t[0]={t[0]}")
        if t.size > 1 and not (np.diff(t) > 0).all():
            raise InvariantViolation("IMU sample times must be strictly increasing")
        if not (self.fs > 0):
            raise InvariantViolation(f"sampling rate must be positive, got {self.fs}")

    @property
    def n_samples(self) -> int:
        return self.t.shape[0]

    @property
    def duration_s(self) -> float:
        return float(self.t[-1] - self.t[0]) if self.n_samples else 0.0

    def channel(self, name: str) -> np.ndarray:
        return self.values[:, CHANNELS.index(name)]

    def sample(self, i: int) -> ImuSample:
        return ImuSample(float(self.t[i]), *map(float, self.values[i]))

    def with_values(self, values: np.ndarray, *, fs: float | None = None,
                    t: np.ndarray | None = None, wrist: Wrist | None = None) -> "ImuStream":
        return ImuStream(
            t=self.t if t is None else t,
            values=values,
            fs=self.fs if fs is None else fs,
            wrist=self.wrist if wrist is None else wrist,
        )


@dataclass(frozen=True)
class MicromovementWindow:
    """One 0.2 s window of class probabilities from the gesture classifier."""

    index: int
    t_start: float
    probs: np.ndarray  # (5,) ordered as MICRO_CLASSES

    def __post_init__(self):
        probs = _readonly(self.probs)
        object.__setattr__(self, "probs", probs)
        if probs.shape != (5,):
            raise InvariantViolation(f"expected 5 class probabilities, got {probs.shape}")
        if not np.isfinite(probs).all() or (probs < -1e-12).any() or (probs > 1 + 1e-12).any():
            raise InvariantViolation(f"probabilities out of [0, 1]: {probs}")
        if abs(float(probs.sum()) - 1.0) > 1e-3:
            raise InvariantViolation(f"probabilities sum to {probs.sum():.6f}, expected 1")

    def prob(self, cls: str) -> float:
        return float(self.probs[MICRO_CLASSES.index(cls)])


@dataclass(frozen=True)
class BiteAnnotation:
    """Manually annotated bite interval with its ground-truth weight."""

    bite_id: str
    start_s: float
    end_s: float
    weight_g: float

    def __post_init__(self):
        if not (self.start_s < self.end_s):
            raise InvariantViolation(
                f"bite {self.bite_id}: start {self.start_s} must precede end {self.end_s}"
            )
        if not (math.isfinite(self.weight_g) and self.weight_g >= 0):
            raise InvariantViolation(
                f"bite {self.bite_id}: weight must be finite and >= 0, got {self.weight_g}"
            )

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


def _check_window_spacing(windows: Sequence[MicromovementWindow]):
    for prev, cur in zip(windows, windows[1:]):
        if abs((cur.t_start - prev.t_start) - MICRO_STEP_S) > 1e-6:
            raise InvariantViolation(
                f"micromovement windows {prev.index}->{cur.index} are "
                f"{cur.t_start - prev.t_start:.4f}s apart, expected {MICRO_STEP_S}s"
            )


@dataclass(frozen=True)
class Session:
    """One recording session: aligned IMU, micromovement windows and bites.

    ``imu`` times are already on the annotation clock (the loader applies
    ``sync_offset_s``); the offset is kept for provenance only.
    """

    subject_id: str
    session_id: str
    imu: ImuStream
    micromovements: tuple[MicromovementWindow, ...]
    bites: tuple[BiteAnnotation, ...]
    sync_offset_s: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "micromovements", tuple(self.micromovements))
        object.__setattr__(self, "bites", tuple(self.bites))
        _check_window_spacing(self.micromovements)
        prev_end = None
        for bite in self.bites:
            if prev_end is not None and bite.start_s < prev_end - TIME_EPS:
                raise InvariantViolation(
                    f"bite {bite.bite_id} overlaps or precedes the previous bite"
                )
            prev_end = bite.end_s
            if self.imu.n_samples == 0 or bite.start_s < self.imu.t[0] - TIME_EPS \
                    or bite.end_s > self.imu.t[-1] + TIME_EPS:
                raise InvariantViolation(
                    f"bite {bite.bite_id} [{bite.start_s}, {bite.end_s}]s lies outside "
                    f"the IMU span [{self.imu.t[0]}, {self.imu.t[-1]}]s"
                )

    def bite(self, bite_id: str) -> BiteAnnotation:
        for b in self.bites:
            if b.bite_id == bite_id:
                return b
        raise UnknownBiteError(f"no bite '{bite_id}' in session {self.session_id}")

    @property
    def key(self) -> str:
        return f"{self.subject_id}/{self.session_id}"


@dataclass(frozen=True)
class BiteSlice:
    """Per-bite cut of a session, re-based so the bite starts at time zero.

    ``imu`` holds samples with start <= t <= end (closed on both ends, so the
    realized span can differ from the annotation by up to one sample period).
    ``windows`` holds every micromovement window whose 0.2 s span intersects
    the bite interval, re-indexed from zero; the leading window may therefore
    start up to 0.2 s before the bite (negative ``t_start``).
    """

    bite: BiteAnnotation
    imu: ImuStream
    windows: tuple[MicromovementWindow, ...]
    start_index: int  # first sample index in the parent session stream
    end_index: int    # one past the last sample index


def slice_bite(session: Session, bite_id: str) -> BiteSlice:
    """Cut the IMU samples and micromovement windows belonging to one bite."""
    bite = session.bite(bite_id)
    t = session.imu.t
    lo = int(np.searchsorted(t, bite.start_s - TIME_EPS, side="left"))
    hi = int(np.searchsorted(t, bite.end_s + TIME_EPS, side="right"))
    sliced = ImuStream(
        t=t[lo:hi] - bite.start_s,
        values=session.imu.values[lo:hi],
        fs=session.imu.fs,
        wrist=session.imu.wrist,
    )
    windows = []
    for w in session.micromovements:
        if w.t_start + MICRO_WINDOW_S >= bite.start_s - TIME_EPS \
                and w.t_start <= bite.end_s + TIME_EPS:
            windows.append(MicromovementWindow(
                index=len(windows),
                t_start=w.t_start - bite.start_s,
                probs=w.probs,
            ))
    return BiteSlice(bite=bite, imu=sliced, windows=tuple(windows),
                     start_index=lo, end_index=hi)


@dataclass(frozen=True)
class FeatureVector:
    """The six-dimensional input of the weight regressor."""

    f1: float  # food gathering duration, seconds
    f2: float  # stillness score, dimensionless
    f3: float  # skewness of windowed gyroscope energy
    f4: float  # skewness of windowed total variance
    f5: float  # max y-gyroscope range, rad/s
    f6: float  # min z-acceleration entropy, nats

    _F2_MAX = 1.0 + math.log(2.0)

    def __post_init__(self):
        vals = self.as_array()
        if not np.isfinite(vals).all():
            raise InvariantViolation(f"feature vector has non-finite entries: {vals}")
        if self.f1 < -1e-12:
            raise InvariantViolation(f"f1 must be non-negative, got {self.f1}")
        if not (-1e-9 <= self.f2 <= self._F2_MAX + 1e-9):
            raise InvariantViolation(
                f"f2 must lie in [0, 1 + ln 2], got {self.f2}"
            )

    def as_array(self) -> np.ndarray:
        return np.array([self.f1, self.f2, self.f3, self.f4, self.f5, self.f6])


FEATURE_NAMES = ("f1", "f2", "f3", "f4", "f5", "f6")
