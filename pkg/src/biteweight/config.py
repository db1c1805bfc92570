"""Single configuration surface for every tunable constant in the pipeline.

Defaults reproduce the published operating point; the CLI exposes overrides
so that interpretation-sensitive constants (entropy bin count, transport
duration bound) can be sensitivity-tested without touching code.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class PipelineConfig:
    # preprocessing
    target_hz: float = 100.0
    fir_taps: int = 501
    fir_cutoff_hz: float = 1.0
    median_order: int = 5

    # micromovement window geometry (fixed by the upstream classifier)
    micro_window_s: float = 0.2
    micro_step_s: float = 0.1

    # food-gathering detection
    p_strong: float = 0.45
    p_weak: float = 0.25
    gap_max_windows: int = 2

    # stillness score normalization
    v_raw_lo: float = 1.0
    v_raw_hi: float = 10.0
    d_frames_max: int = 35

    # statistical feature windows
    stat_window_s: float = 2.0
    stat_step_s: float = 0.1
    entropy_bins: int = 16

    # comparison pipeline windows
    mirtchouk_window_s: float = 5.0
    mirtchouk_step_s: float = 0.1
    poly_degree: int = 4

    # learners
    svr_c: float = 1.01
    svr_epsilon: float = 0.016
    svr_gap_tol: float = 1e-6
    svr_max_passes: int = 100_000
    forest_trees: int = 40

    # reporting
    histogram_bin_g: float = 1.0

    def replace(self, **overrides) -> "PipelineConfig":
        return dataclasses.replace(self, **overrides)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


DEFAULT_CONFIG = PipelineConfig()
