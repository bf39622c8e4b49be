"""CART decision tree classifier (Gini or entropy impurity)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CRITERIA = ("gini", "entropy")


@dataclass(frozen=True)
class DTConfig:
    criterion: str = "gini"
    max_depth: int | None = 17
    min_samples_split: int = 2

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


def gini(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - np.sum(p * p))


def entropy(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts[counts > 0] / n
    return float(-np.sum(p * np.log2(p)))


def _impurity_rows(counts: np.ndarray, criterion: str) -> np.ndarray:
    # impurity of each row of a (m, n_classes) count matrix
    n = counts.sum(axis=1, keepdims=True)
    p = counts / np.where(n > 0, n, 1)
    if criterion == "gini":
        return 1.0 - np.sum(p * p, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(p > 0, np.log2(np.where(p > 0, p, 1)), 0.0)
    return -np.sum(p * logs, axis=1)


class DecisionTreeClassifier:
    """Greedy CART.

    Split candidates are midpoints between consecutive distinct sorted
    feature values; samples with ``x[f] <= threshold`` go left.  Among equal
    impurity decreases the lowest feature index, then lowest threshold, wins.
    """

    def __init__(self, config: DTConfig = DTConfig()):
        self.config = config

    def fit(self, X, y, seed: int = 0) -> "DecisionTreeClassifier":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        self.classes_ = np.unique(y)
        yi = np.searchsorted(self.classes_, y)
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.counts: list[list[int]] = []
        self._grow(X, yi, np.arange(len(y)), 0)
        return self

    def _new_node(self, counts) -> int:
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append([int(c) for c in counts])
        return len(self.feature) - 1

    def _grow(self, X, yi, rows, depth) -> int:
        k = len(self.classes_)
        counts = np.bincount(yi[rows], minlength=k)
        node = self._new_node(counts)
        cfg = self.config
        if (
            np.count_nonzero(counts) <= 1
            or len(rows) < cfg.min_samples_split
            or (cfg.max_depth is not None and depth >= cfg.max_depth)
        ):
            return node
        split = self._best_split(X[rows], yi[rows], counts)
        if split is None:
            return node
        f, thr = split
        mask = X[rows, f] <= thr
        self.feature[node] = f
        self.threshold[node] = thr
        self.left[node] = self._grow(X, yi, rows[mask], depth + 1)
        self.right[node] = self._grow(X, yi, rows[~mask], depth + 1)
        return node

    def _best_split(self, Xn, yn, counts):
        n, d = Xn.shape
        k = len(self.classes_)
        onehot = np.zeros((n, k))
        onehot[np.arange(n), yn] = 1.0
        best = None
        best_score = np.inf
        for f in range(d):
            order = np.argsort(Xn[:, f], kind="stable")
            xs = Xn[order, f]
            valid = np.nonzero(xs[:-1] < xs[1:])[0]
            if len(valid) == 0:
                continue
            cum = np.cumsum(onehot[order], axis=0)
            left = cum[valid]
            right = counts[None, :] - left
            nl = (valid + 1).astype(float)
            nr = n - nl
            score = (nl * _impurity_rows(left, self.config.criterion)
                     + nr * _impurity_rows(right, self.config.criterion)) / n
            j = int(np.argmin(score))
            if score[j] < best_score:
                best_score = score[j]
                i = valid[j]
                thr = (xs[i] + xs[i + 1]) / 2.0
                if not xs[i] <= thr < xs[i + 1]:
                    thr = xs[i]
                best = (f, float(thr))
        return best

    def apply(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty(len(X), dtype=int)
        for r, x in enumerate(X):
            node = 0
            while self.left[node] >= 0:
                node = self.left[node] if x[self.feature[node]] <= self.threshold[node] else self.right[node]
            out[r] = node
        return out

    def predict(self, X) -> np.ndarray:
        leaves = self.apply(X)
        return np.array([self.classes_[int(np.argmax(self.counts[i]))] for i in leaves], dtype=int)

    @property
    def depth(self) -> int:
        def walk(i):
            if self.left[i] < 0:
                return 0
            return 1 + max(walk(self.left[i]), walk(self.right[i]))
        return walk(0)

    def get_state(self) -> dict:
        return {
            "classes": self.classes_.tolist(),
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left,
            "right": self.right,
            "counts": self.counts,
        }

    @classmethod
    def from_state(cls, config: DTConfig, state: dict) -> "DecisionTreeClassifier":
        obj = cls(config)
        obj.classes_ = np.asarray(state["classes"], dtype=int)
        obj.feature = list(state["feature"])
        obj.threshold = [float(t) for t in state["threshold"]]
        obj.left = list(state["left"])
        obj.right = list(state["right"])
        obj.counts = [list(c) for c in state["counts"]]
        return obj
