"""Per-bite feature extraction for the proposed pipeline.

``extract_features`` is the per-bite primitive; ``ProposedFeatureExtractor``
wraps it in the scikit-learn transformer API so the pipeline composes with
the usual model-selection tooling.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .behavioral import behavioral_features
from .config import DEFAULT_CONFIG, PipelineConfig
from .model import BiteSlice, FeatureVector
from .statistical import statistical_features


def extract_features(bite: BiteSlice,
                     cfg: PipelineConfig = DEFAULT_CONFIG) -> FeatureVector:
    """Six-dimensional feature vector for one bite.

    Raises NoMouthEventError for bites without a mouth-dominant window.
    """
    f1, f2 = behavioral_features(bite, cfg)
    f3, f4, f5, f6 = statistical_features(bite.imu, cfg)
    return FeatureVector(f1=f1, f2=f2, f3=f3, f4=f4, f5=f5, f6=f6)


class ProposedFeatureExtractor(TransformerMixin, BaseEstimator):
    """Stateless transformer: sequence of bite slices -> (n, 6) matrix.

    Every bite must be usable; batch callers that need to skip bites
    without a mouth event should call ``extract_features`` per bite.
    """

    def __init__(self, cfg: PipelineConfig = DEFAULT_CONFIG):
        self.cfg = cfg

    def fit(self, X: Sequence[BiteSlice], y=None):
        return self

    def transform(self, X: Sequence[BiteSlice]) -> np.ndarray:
        return np.array([extract_features(b, self.cfg).as_array() for b in X])
