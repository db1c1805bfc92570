"""Behavioral features: food gathering duration (f1) and stillness score (f2).

Both are read off the micromovement probability windows of a single bite;
f2 additionally pulls the IMU samples under the transport segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT_CONFIG, PipelineConfig
from .errors import NoMouthEventError
from .model import (
    BiteSlice,
    ImuStream,
    M_IDX,
    MICRO_STEP_S,
    MICRO_WINDOW_S,
    MicromovementWindow,
    P_IDX,
    U_IDX,
)


def dominant_class(window: MicromovementWindow) -> int:
    """Index of the window's dominant class; exact ties go to mouth."""
    probs = window.probs
    top = probs.max()
    if probs[M_IDX] == top:
        return M_IDX
    return int(np.argmax(probs))


def first_mouth_window(windows: Sequence[MicromovementWindow]) -> int:
    """Position of the first mouth-dominant window (food enters the mouth)."""
    for i, w in enumerate(windows):
        if dominant_class(w) == M_IDX:
            return i
    raise NoMouthEventError("no mouth-dominant window in bite")


@dataclass(frozen=True)
class GatheringRun:
    """Contiguous food-gathering stretch found before the mouth event."""

    start_window: int
    end_window: int

    @property
    def n_windows(self) -> int:
        return self.end_window - self.start_window + 1

    @property
    def duration_s(self) -> float:
        return self.n_windows * MICRO_STEP_S


def gathering_run(windows: Sequence[MicromovementWindow], mouth_idx: int,
                  cfg: PipelineConfig = DEFAULT_CONFIG) -> GatheringRun | None:
    """Find the gathering run by scanning backward from the mouth event.

    Windows between the run and the mouth (the transport region) are
    skipped until the first strong pick-probability (> p_strong) window.
    From there the run extends backward; a dip of at most
    ``gap_max_windows`` consecutive windows with pick probability in
    [p_weak, p_strong] is bridged only when the next-earlier window is
    strong again. Returns None when no strong window precedes the mouth.
    """
    p = [w.probs[P_IDX] for w in windows]
    i = mouth_idx - 1
    while i >= 0 and p[i] <= cfg.p_strong:
        i -= 1
    if i < 0:
        return None
    end = i
    start = i
    while i >= 0:
        if p[i] > cfg.p_strong:
            start = i
            i -= 1
            continue
        gap = 0
        j = i
        while j >= 0 and cfg.p_weak <= p[j] <= cfg.p_strong and gap < cfg.gap_max_windows:
            gap += 1
            j -= 1
        if gap and j >= 0 and p[j] > cfg.p_strong:
            start = j
            i = j - 1
            continue
        break
    return GatheringRun(start_window=start, end_window=end)


def gathering_duration(windows: Sequence[MicromovementWindow], mouth_idx: int,
                       cfg: PipelineConfig = DEFAULT_CONFIG) -> float:
    """f1: duration of the gathering run in seconds (0 when there is none)."""
    run = gathering_run(windows, mouth_idx, cfg)
    return run.duration_s if run is not None else 0.0


@dataclass(frozen=True)
class TransportSegment:
    """Upward-movement stretch between gathering and mouth insertion."""

    start_window: int
    end_window: int
    v_raw: float     # mean per-channel IMU variance under the segment
    d_frames: int    # segment length in micromovement windows

    def v_norm(self, cfg: PipelineConfig = DEFAULT_CONFIG) -> float:
        clamped = min(max(self.v_raw, cfg.v_raw_lo), cfg.v_raw_hi)
        return (clamped - cfg.v_raw_lo) / (cfg.v_raw_hi - cfg.v_raw_lo)

    def d_norm(self, cfg: PipelineConfig = DEFAULT_CONFIG) -> float:
        return min(max(self.d_frames, 0), cfg.d_frames_max) / cfg.d_frames_max


def transport_segment(windows: Sequence[MicromovementWindow], mouth_idx: int,
                      imu: ImuStream) -> TransportSegment | None:
    """Locate the maximal upward-dominant block ending right before the mouth.

    Returns None when the window before the mouth is not upward-dominant
    (empty transport, which scores a stillness of 0).
    """
    end = mouth_idx - 1
    if end < 0 or dominant_class(windows[end]) != U_IDX:
        return None
    start = end
    while start > 0 and dominant_class(windows[start - 1]) == U_IDX:
        start -= 1
    lo = max(0, int(round(windows[start].t_start * imu.fs)))
    hi = min(imu.n_samples, int(round((windows[end].t_start + MICRO_WINDOW_S) * imu.fs)))
    if hi - lo >= 2:
        v_raw = float(np.mean(np.var(imu.values[lo:hi], axis=0)))
    else:
        v_raw = 0.0
    return TransportSegment(
        start_window=start, end_window=end, v_raw=v_raw,
        d_frames=end - start + 1,
    )


def stillness_score(segment: TransportSegment | None,
                    cfg: PipelineConfig = DEFAULT_CONFIG) -> float:
    """f2 = (1 - V_norm) + ln(D_norm + 1); 0 for an empty transport."""
    if segment is None:
        return 0.0
    return (1.0 - segment.v_norm(cfg)) + math.log(segment.d_norm(cfg) + 1.0)


def behavioral_features(bite: BiteSlice,
                        cfg: PipelineConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """Compute (f1, f2) for one bite slice.

    Raises NoMouthEventError when the bite has no mouth-dominant window,
    which marks it unusable for this pipeline.
    """
    mouth = first_mouth_window(bite.windows)
    f1 = gathering_duration(bite.windows, mouth, cfg)
    segment = transport_segment(bite.windows, mouth, bite.imu)
    f2 = stillness_score(segment, cfg)
    return f1, f2
