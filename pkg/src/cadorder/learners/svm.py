"""Kernel SVM with an RBF kernel, trained by SMO, one-vs-one for multiclass.

Each binary problem solves the dual

    min 0.5 a'Qa - sum(a),  0 <= a <= C,  y'a = 0,   Q_ij = y_i y_j K(x_i, x_j)

with second-order working-set selection.  Iteration stops once the maximal
KKT violation ``m(a) - M(a)`` is at most ``tol``; the bias is placed at the
midpoint of the feasible interval so every sample's KKT residual on
``y f(x)`` is within ``tol / 2``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

_TAU = 1e-12


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SVMConfig:
    C: float = 316.0
    gamma: float = 0.08
    tol: float = 0.0316
    max_iter: int = 1_000_000

    def __post_init__(self):
        if not (self.C > 0 and self.gamma > 0 and self.tol > 0):
            raise ValueError("C, gamma and tol must be positive")


def rbf_kernel(A, B, gamma: float) -> np.ndarray:
    """exp(-gamma * ||a - b||^2) for every row pair."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    sq = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * A @ B.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


def gram_matrix(X, gamma: float) -> np.ndarray:
    K = rbf_kernel(X, X, gamma)
    K = 0.5 * (K + K.T)
    np.fill_diagonal(K, 1.0)
    return K


@dataclass
class BinarySolution:
    alpha: np.ndarray
    b: float
    n_iter: int
    converged: bool
    gap: float


def smo(K: np.ndarray, y: np.ndarray, C: float, tol: float, max_iter: int) -> BinarySolution:
    """Solve one binary dual problem; ``y`` holds +1/-1."""
    y = np.asarray(y, dtype=float)
    n = len(y)
    alpha = np.zeros(n)
    G = -np.ones(n)
    Kd = np.diag(K)
    it = 0
    converged = False
    gap = np.inf
    while it < max_iter:
        yG = -y * G
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            converged, gap = True, 0.0
            break
        i = int(np.argmax(np.where(up, yG, -np.inf)))
        m = yG[i]
        M = np.min(np.where(low, yG, np.inf))
        gap = m - M
        if gap <= tol:
            converged = True
            break
        # second-order choice of j among violating low-set members
        cand = low & (yG < m)
        bdiff = m - yG
        a = Kd[i] + Kd - 2.0 * K[i]
        a = np.where(a > 0, a, _TAU)
        obj = np.where(cand, -(bdiff * bdiff) / a, np.inf)
        j = int(np.argmin(obj))
        yi, yj = y[i], y[j]
        ai_old, aj_old = alpha[i], alpha[j]
        quad = Kd[i] + Kd[j] - 2.0 * K[i, j]
        quad = quad if quad > 0 else _TAU
        if yi != yj:
            delta = (-G[i] - G[j]) / quad
            diff = ai_old - aj_old
            ai, aj = ai_old + delta, aj_old + delta
            if diff > 0:
                if aj < 0:
                    aj, ai = 0.0, diff
            elif ai < 0:
                ai, aj = 0.0, -diff
            if diff > 0:
                if ai > C:
                    ai, aj = C, C - diff
            elif aj > C:
                aj, ai = C, C + diff
        else:
            delta = (G[i] - G[j]) / quad
            total = ai_old + aj_old
            ai, aj = ai_old - delta, aj_old + delta
            if total > C:
                if ai > C:
                    ai, aj = C, total - C
            elif aj < 0:
                aj, ai = 0.0, total
            if total > C:
                if aj > C:
                    aj, ai = C, total - C
            elif ai < 0:
                ai, aj = 0.0, total
        alpha[i], alpha[j] = ai, aj
        dai, daj = ai - ai_old, aj - aj_old
        G += y * (K[i] * (yi * dai) + K[j] * (yj * daj))
        it += 1
    yG = -y * G
    up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
    low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
    m = yG[up].max() if up.any() else None
    M = yG[low].min() if low.any() else None
    if m is None:
        b = float(M)
    elif M is None:
        b = float(m)
    else:
        b = float(0.5 * (m + M))
    return BinarySolution(alpha, b, it, converged, float(gap))


class SVMClassifier:
    def __init__(self, config: SVMConfig = SVMConfig()):
        self.config = config

    def fit(self, X, y, seed: int = 0) -> "SVMClassifier":
        cfg = self.config
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        self.classes_ = np.unique(y)
        self.machines_ = []
        self.converged_ = True
        for a, b in combinations(self.classes_.tolist(), 2):
            rows = np.nonzero((y == a) | (y == b))[0]
            yb = np.where(y[rows] == a, 1.0, -1.0)
            K = gram_matrix(X[rows], cfg.gamma)
            sol = smo(K, yb, cfg.C, cfg.tol, cfg.max_iter)
            self.converged_ &= sol.converged
            sv = sol.alpha > 0
            self.machines_.append({
                "classes": [a, b],
                "support": X[rows][sv],
                "coef": (sol.alpha * yb)[sv],
                "alpha": sol.alpha[sv],
                "b": sol.b,
                "n_iter": sol.n_iter,
                "gap": sol.gap,
            })
        if len(self.classes_) == 1:
            self.machines_ = []
        if not self.converged_:
            warnings.warn("SVM reached max_iter before meeting tol", ConvergenceWarning, stacklevel=2)
        return self

    def decision_functions(self, X) -> np.ndarray:
        """(n, n_pairs) signed scores; positive votes for the pair's first class."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.zeros((len(X), len(self.machines_)))
        for c, m in enumerate(self.machines_):
            if len(m["coef"]):
                out[:, c] = rbf_kernel(X, m["support"], self.config.gamma) @ m["coef"] + m["b"]
            else:
                out[:, c] = m["b"]
        return out

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if len(self.classes_) == 1:
            return np.full(len(X), self.classes_[0])
        scores = self.decision_functions(X)
        votes = np.zeros((len(X), len(self.classes_)), dtype=int)
        pos = {c: i for i, c in enumerate(self.classes_.tolist())}
        for c, m in enumerate(self.machines_):
            a, b = m["classes"]
            win_a = scores[:, c] > 0
            votes[win_a, pos[a]] += 1
            votes[~win_a, pos[b]] += 1
        return self.classes_[np.argmax(votes, axis=1)]

    def get_state(self) -> dict:
        return {
            "classes": self.classes_.tolist(),
            "converged": self.converged_,
            "machines": [
                {
                    "classes": m["classes"],
                    "support": m["support"].tolist(),
                    "coef": m["coef"].tolist(),
                    "alpha": m["alpha"].tolist(),
                    "b": m["b"],
                    "n_iter": m["n_iter"],
                    "gap": m["gap"],
                }
                for m in self.machines_
            ],
        }

    @classmethod
    def from_state(cls, config: SVMConfig, state: dict) -> "SVMClassifier":
        obj = cls(config)
        obj.classes_ = np.asarray(state["classes"], dtype=int)
        obj.converged_ = state["converged"]
        obj.machines_ = [
            {
                **m,
                "support": np.asarray(m["support"], dtype=float).reshape(len(m["coef"]), -1),
                "coef": np.asarray(m["coef"], dtype=float),
                "alpha": np.asarray(m["alpha"], dtype=float),
            }
            for m in state["machines"]
        ]
        return obj
