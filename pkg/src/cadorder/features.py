"""The eleven polynomial features and their standardization."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .polyset import NUM_VARS, Problem

NUM_FEATURES = 11
FEATURE_NAMES = tuple(f"f{i}" for i in range(1, NUM_FEATURES + 1))
FEATURE_DESCRIPTIONS = (
    "number of polynomials",
    "maximum total degree of polynomials",
    "maximum degree of x0 among all polynomials",
    "maximum degree of x1 among all polynomials",
    "maximum degree of x2 among all polynomials",
    "proportion of polynomials containing x0",
    "proportion of polynomials containing x1",
    "proportion of polynomials containing x2",
    "proportion of monomials containing x0",
    "proportion of monomials containing x1",
    "proportion of monomials containing x2",
)


def extract_features(problem: Problem) -> np.ndarray:
    """Feature vector of length 11 for a canonical three-variable problem.

    Monomials are counted with multiplicity across polynomials, constant
    terms included in the denominator of the last three features.
    """
    polys = problem.polynomials
    if not polys:
        raise ValueError("problem has no polynomials")
    n = NUM_VARS
    max_deg = [0] * n
    in_poly = [0] * n
    in_mono = [0] * n
    n_mono = 0
    max_total = 0
    for p in polys:
        present = [False] * n
        for e in p.terms:
            n_mono += 1
            max_total = max(max_total, sum(e))
            for v in range(n):
                if e[v]:
                    present[v] = True
                    in_mono[v] += 1
                    if e[v] > max_deg[v]:
                        max_deg[v] = e[v]
        for v in range(n):
            in_poly[v] += present[v]
    m = len(polys)
    return np.array(
        [m, max_total, *max_deg, *(c / m for c in in_poly), *(c / n_mono for c in in_mono)],
        dtype=float,
    )


def feature_matrix(problems: Iterable[Problem]) -> np.ndarray:
    rows = [extract_features(p) for p in problems]
    if not rows:
        return np.empty((0, NUM_FEATURES))
    return np.vstack(rows)


@dataclass(frozen=True, eq=False)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    def __eq__(self, other) -> bool:
        if not isinstance(other, Standardizer):
            return NotImplemented
        return np.array_equal(self.mean, other.mean) and np.array_equal(self.std, other.std)

    __hash__ = None

    def transform(self, x) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.mean) / self.std

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Standardizer":
        return cls(np.asarray(d["mean"], dtype=float), np.asarray(d["std"], dtype=float))


def fit_standardizer(rows) -> Standardizer:
    """Population mean/std per column; zero-variance columns get std 1."""
    x = np.asarray(rows, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need at least two rows to fit a standardizer")
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    # exact test: rounding in the mean can leave a tiny std on a constant column
    const = np.all(x == x[0], axis=0)
    mean[const] = x[0, const]
    std[const | (std == 0)] = 1.0
    return Standardizer(mean, std)


def transform(s: Standardizer, v) -> np.ndarray:
    return s.transform(v)


def write_feature_csv(ids: Sequence[str], x: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", *FEATURE_NAMES])
    for pid, row in zip(ids, x):
        w.writerow([pid, *(repr(float(v)) for v in row)])
    return buf.getvalue()


def read_feature_csv(text: str) -> tuple[list[str], np.ndarray]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header[1:]) != FEATURE_NAMES:
        raise ValueError("feature CSV header does not name f1..f11")
    ids, rows = [], []
    for rec in reader:
        ids.append(rec[0])
        rows.append([float(v) for v in rec[1:]])
    return ids, np.array(rows, dtype=float).reshape(-1, NUM_FEATURES)
