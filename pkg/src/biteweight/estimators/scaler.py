"""Per-feature z-score standardization with population statistics."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ..errors import EmptyMatrixError

#: Columns with std at or below this are centered but not scaled.
STD_FLOOR = 1e-12


class ZScoreScaler(TransformerMixin, BaseEstimator):
    """Standardize columns to zero mean, unit population std.

    Near-constant columns (std <= 1e-12) pass through centered only, so a
    degenerate feature cannot blow up the standardized matrix.
    """

    def fit(self, X: np.ndarray, y=None) -> "ZScoreScaler":
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] == 0:
            raise EmptyMatrixError(f"need a 2-D matrix with rows, got shape {X.shape}")
        self.means_ = X.mean(axis=0)
        self.stds_ = X.std(axis=0)
        self.scale_ = np.where(self.stds_ <= STD_FLOOR, 1.0, self.stds_)
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return (X - self.means_) / self.scale_

    def inverse_transform(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float) * self.scale_ + self.means_
