"""Linear epsilon-insensitive support vector regression.

The training problem

    min_{w,b}  0.5 ||w||^2 + C * sum_i max(0, |y_i - w.x_i - b| - eps)

is solved in its dual form over beta_i in [-C, C] with sum(beta) = 0:

    max_beta  -0.5 beta' K beta + y' beta - eps * ||beta||_1,   K = X X'

by deterministic pairwise coordinate optimization: pick the maximal
KKT-violating pair, minimize the piecewise-quadratic restriction exactly,
repeat. Convergence is certified by the duality gap (primal evaluated at
the exactly optimal bias for the current weights), so the returned model
carries a <= gap_tol optimality certificate.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from ..errors import EmptyTrainingError, NotConvergedError
from .scaler import ZScoreScaler

#: Slack for box-bound feasibility tests on beta.
_BOX_EPS = 1e-12
#: Duality gap is re-evaluated every this many pair updates.
_GAP_EVERY = 16
#: Incrementally updated state is recomputed from scratch this often.
_REFRESH_EVERY = 4096


def svr_primal_objective(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray,
                         C: float, eps: float) -> float:
    resid = np.abs(y - X @ w - b) - eps
    return 0.5 * float(w @ w) + C * float(np.clip(resid, 0.0, None).sum())


def optimal_bias(resid_const: np.ndarray, eps: float) -> float:
    """Exact minimizer of sum_i max(0, |c_i - b| - eps) over b.

    The loss is piecewise linear in b with slope -n below all breakpoints
    c_i +- eps and +1 added at each breakpoint, so the minimum sits between
    the n-th and (n+1)-th sorted breakpoints; flat stretches are broken at
    their midpoint.
    """
    bps = np.sort(np.concatenate([resid_const - eps, resid_const + eps]))
    n = resid_const.shape[0]
    return float(0.5 * (bps[n - 1] + bps[n]))


def _line_search(a: float, g: float, beta_i: float, beta_j: float,
                 eps: float, t_lo: float, t_hi: float) -> float:
    """Minimize phi(t) = 0.5 a t^2 + g t + eps(|beta_i + t| + |beta_j - t|)
    over [t_lo, t_hi] (constant offsets dropped)."""

    def phi(t: float) -> float:
        return 0.5 * a * t * t + g * t + eps * (abs(beta_i + t) + abs(beta_j - t))

    pts = [t_lo, t_hi]
    for bp in (-beta_i, beta_j):
        if t_lo < bp < t_hi:
            pts.append(bp)
    pts.sort()
    candidates = list(pts)
    if a > 0:
        for lo, hi in zip(pts, pts[1:]):
            if hi <= lo:
                continue
            mid = 0.5 * (lo + hi)
            s_i = 1.0 if beta_i + mid >= 0 else -1.0
            s_j = 1.0 if beta_j - mid >= 0 else -1.0
            t_star = -(g + eps * (s_i - s_j)) / a
            if lo <= t_star <= hi:
                candidates.append(t_star)
    best = candidates[0]
    best_val = phi(best)
    for t in candidates[1:]:
        val = phi(t)
        if val < best_val:
            best, best_val = t, val
    return best


def solve_svr_dual(X: np.ndarray, y: np.ndarray, C: float, eps: float,
                   gap_tol: float = 1e-6, max_passes: int = 100_000) -> dict:
    """Run the pairwise dual solver; returns w, b, beta, gap and pass count.

    Raises NotConvergedError when the pass budget runs out with the gap
    still above ``gap_tol``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = X.shape[0]
    K = X @ X.T
    beta = np.zeros(n)
    u = -y.copy()           # u_i = w . x_i - y_i
    w = np.zeros(X.shape[1])

    gap = np.inf
    b = 0.0
    passes = 0
    for passes in range(max_passes + 1):
        if passes % _REFRESH_EVERY == 0 and passes:
            u = K @ beta - y
            w = X.T @ beta
        if passes % _GAP_EVERY == 0:
            b = optimal_bias(-u, eps)
            primal = 0.5 * float(w @ w) + C * float(
                np.clip(np.abs(-u - b) - eps, 0.0, None).sum())
            dual = -0.5 * float(w @ w) + float(y @ beta) - eps * float(np.abs(beta).sum())
            gap = primal - dual
            if gap <= gap_tol:
                return {"w": w, "b": b, "beta": beta, "gap": gap, "passes": passes}

        up_cost = u + np.where(beta >= 0, eps, -eps)
        down_cost = u + np.where(beta > 0, eps, -eps)
        up_cost = np.where(beta < C - _BOX_EPS, up_cost, np.inf)
        down_cost = np.where(beta > -C + _BOX_EPS, down_cost, -np.inf)
        i = int(np.argmin(up_cost))
        j = int(np.argmax(down_cost))
        violation = down_cost[j] - up_cost[i]
        if violation <= 1e-14:
            # Dual-optimal up to float precision; the gap check above is
            # authoritative, so force one final evaluation.
            b = optimal_bias(-u, eps)
            primal = 0.5 * float(w @ w) + C * float(
                np.clip(np.abs(-u - b) - eps, 0.0, None).sum())
            dual = -0.5 * float(w @ w) + float(y @ beta) - eps * float(np.abs(beta).sum())
            gap = primal - dual
            if gap <= gap_tol:
                return {"w": w, "b": b, "beta": beta, "gap": gap, "passes": passes}
            break

        a = K[i, i] + K[j, j] - 2.0 * K[i, j]
        g = float(u[i] - u[j])
        t_hi = min(C - beta[i], beta[j] + C)
        t_lo = max(-C - beta[i], beta[j] - C)
        t = _line_search(float(a), g, float(beta[i]), float(beta[j]), eps, t_lo, t_hi)
        if t == 0.0:
            break
        beta[i] += t
        beta[j] -= t
        u += t * (K[:, i] - K[:, j])
        w += t * (X[i] - X[j])

    raise NotConvergedError(gap=float(gap), passes=passes)


class LinearEpsilonSVR(RegressorMixin, BaseEstimator):
    """Linear eps-insensitive SVR with built-in z-score standardization.

    Parameters mirror the published operating point (C=1.01, epsilon=0.016).
    ``fit`` fails loudly with NotConvergedError instead of returning a model
    without its optimality certificate.
    """

    def __init__(self, C: float = 1.01, epsilon: float = 0.016,
                 gap_tol: float = 1e-6, max_passes: int = 100_000,
                 standardize: bool = True):
        self.C = C
        self.epsilon = epsilon
        self.gap_tol = gap_tol
        self.max_passes = max_passes
        self.standardize = standardize

    def fit(self, X: np.ndarray, y: np.ndarray) -> "LinearEpsilonSVR":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim != 2 or X.shape[0] < 2:
            raise EmptyTrainingError(f"need >= 2 training rows, got shape {X.shape}")
        if not (np.isfinite(X).all() and np.isfinite(y).all()):
            raise ValueError("training data must be finite")
        if self.standardize:
            self.scaler_ = ZScoreScaler().fit(X)
            Xs = self.scaler_.transform(X)
        else:
            self.scaler_ = None
            Xs = X
        sol = solve_svr_dual(Xs, y, self.C, self.epsilon,
                             gap_tol=self.gap_tol, max_passes=self.max_passes)
        self.coef_ = sol["w"]
        self.intercept_ = sol["b"]
        self.dual_coef_ = sol["beta"]
        self.gap_ = sol["gap"]
        self.passes_ = sol["passes"]
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.scaler_ is not None:
            X = self.scaler_.transform(X)
        return X @ self.coef_ + self.intercept_
