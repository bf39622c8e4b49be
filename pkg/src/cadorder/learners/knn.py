"""k-nearest-neighbour classification with brute-force or ball-tree search.

Both search strategies return the same neighbours: candidates are ranked by
(squared distance, training index), and the tree only prunes a ball when its
lower distance bound is strictly beyond the current k-th candidate.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

WEIGHTINGS = ("uniform", "distance")
ALGORITHMS = ("brute", "ball_tree")


@dataclass(frozen=True)
class KNNConfig:
    k: int = 5
    weighting: str = "distance"
    algorithm: str = "ball_tree"
    leaf_size: int = 20

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")
        if self.leaf_size < 1:
            raise ValueError("leaf_size must be positive")


def _sq_dists(rows: np.ndarray, q: np.ndarray) -> np.ndarray:
    # the single distance kernel shared by both search strategies
    diff = rows - q
    return np.einsum("ij,ij->i", diff, diff)


class BallTree:
    """Binary ball tree over the rows of ``data``.

    Nodes are stored in flat arrays: ``start``/``end`` index into
    ``idx_array``; children of node ``i`` are ``left[i]``, ``right[i]``
    (-1 for leaves).
    """

    def __init__(self, data: np.ndarray, leaf_size: int = 20):
        self.data = np.ascontiguousarray(data, dtype=float)
        self.leaf_size = leaf_size
        n = self.data.shape[0]
        self.idx_array = np.arange(n)
        self.start: list[int] = []
        self.end: list[int] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.centroid: list[np.ndarray] = []
        self.radius: list[float] = []
        if n:
            self._build(0, n)

    def _build(self, lo: int, hi: int) -> int:
        node = len(self.start)
        pts = self.data[self.idx_array[lo:hi]]
        c = pts.mean(axis=0)
        r = float(np.sqrt(_sq_dists(pts, c).max()))
        self.start.append(lo)
        self.end.append(hi)
        self.centroid.append(c)
        self.radius.append(r)
        self.left.append(-1)
        self.right.append(-1)
        if hi - lo > self.leaf_size:
            spread = pts.max(axis=0) - pts.min(axis=0)
            dim = int(np.argmax(spread))
            if spread[dim] > 0:
                order = np.argsort(pts[:, dim], kind="stable")
                self.idx_array[lo:hi] = self.idx_array[lo:hi][order]
                mid = lo + (hi - lo) // 2
                self.left[node] = self._build(lo, mid)
                self.right[node] = self._build(mid, hi)
        return node

    def query(self, q: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
        """Indices and squared distances of the k nearest rows, best first."""
        q = np.asarray(q, dtype=float)
        k = min(k, self.data.shape[0])
        # max-heap of the current k best as (-d2, -index)
        heap: list[tuple[float, int]] = []

        def worst():
            return -heap[0][0] if len(heap) == k else np.inf

        def lower_bound(node):
            d = float(np.sqrt(_sq_dists(self.centroid[node][None, :], q)[0]))
            return max(0.0, d - self.radius[node])

        def visit(node, lb):
            w = worst()
            # slack absorbs rounding in the bound so exact ties are never pruned
            if lb > np.sqrt(w) * (1 + 1e-9) + 1e-12:
                return
            if self.left[node] < 0:
                ids = self.idx_array[self.start[node]:self.end[node]]
                d2 = _sq_dists(self.data[ids], q)
                for i, d in zip(ids.tolist(), d2.tolist()):
                    item = (-d, -i)
                    if len(heap) < k:
                        heapq.heappush(heap, item)
                    elif (d, i) < (-heap[0][0], -heap[0][1]):
                        heapq.heapreplace(heap, item)
                return
            a, b = self.left[node], self.right[node]
            la, lb_ = lower_bound(a), lower_bound(b)
            if lb_ < la:
                a, b, la, lb_ = b, a, lb_, la
            visit(a, la)
            visit(b, lb_)

        visit(0, lower_bound(0))
        best = sorted((-d, -i) for d, i in heap)
        return np.array([i for _, i in best], dtype=int), np.array([d for d, _ in best])


def brute_query(data: np.ndarray, q: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    d2 = _sq_dists(data, np.asarray(q, dtype=float))
    order = np.lexsort((np.arange(len(d2)), d2))[:k]
    return order, d2[order]


class KNNClassifier:
    def __init__(self, config: KNNConfig = KNNConfig()):
        self.config = config

    def fit(self, X, y, seed: int = 0) -> "KNNClassifier":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        if self.config.k > len(X):
            raise ValueError(f"k={self.config.k} exceeds the {len(X)} training rows")
        self.X_ = np.ascontiguousarray(X)
        self.y_ = y
        self.classes_ = np.unique(y)
        self._index()
        return self

    def _index(self):
        self.tree_ = BallTree(self.X_, self.config.leaf_size) if self.config.algorithm == "ball_tree" else None

    def kneighbors(self, q) -> tuple[np.ndarray, np.ndarray]:
        if self.tree_ is not None:
            return self.tree_.query(q, self.config.k)
        return brute_query(self.X_, q, self.config.k)

    def _vote(self, idx: np.ndarray, d2: np.ndarray) -> int:
        labels = self.y_[idx]
        pos = np.searchsorted(self.classes_, labels)
        if self.config.weighting == "distance":
            exact = d2 == 0
            if exact.any():
                pos = pos[exact]
                w = np.ones(len(pos))
            else:
                w = 1.0 / np.sqrt(d2)
        else:
            w = np.ones(len(pos))
        score = np.zeros(len(self.classes_))
        np.add.at(score, pos, w)
        return int(self.classes_[int(np.argmax(score))])

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return np.array([self._vote(*self.kneighbors(q)) for q in X], dtype=int)

    def get_state(self) -> dict:
        return {"X": self.X_.tolist(), "y": self.y_.tolist()}

    @classmethod
    def from_state(cls, config: KNNConfig, state: dict) -> "KNNClassifier":
        obj = cls(config)
        obj.X_ = np.ascontiguousarray(np.asarray(state["X"], dtype=float))
        obj.y_ = np.asarray(state["y"], dtype=int)
        obj.classes_ = np.unique(obj.y_)
        obj._index()
        return obj
