"""k-fold cross-validation and exhaustive grid search."""

from __future__ import annotations

import itertools
import warnings
from numbers import Real
from typing import Mapping, Sequence

import numpy as np

from .model import fit, make_config


class GridBoundaryWarning(UserWarning):
    """The best value of a numeric hyperparameter sits on the edge of its grid."""


def kfold_split(n: int, k: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Shuffled partition of ``range(n)`` into k folds of near-equal size."""
    if k < 2:
        raise ValueError("need at least two folds")
    if k > n:
        raise ValueError(f"cannot split {n} rows into {k} folds")
    perm = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(perm, k)
    out = []
    for i, val in enumerate(folds):
        train = np.concatenate([f for j, f in enumerate(folds) if j != i])
        out.append((np.sort(train), np.sort(val)))
    return out


def grid_points(grid: Mapping[str, Sequence]) -> list[dict]:
    """Cartesian product in key order, last key varying fastest."""
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise ValueError("grid must have at least one value per hyperparameter")
    keys = list(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def _point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def boundary_hits(grid: Mapping[str, Sequence], best: Mapping) -> list[str]:
    hits = []
    for key, values in grid.items():
        nums = [v for v in values if isinstance(v, Real) and not isinstance(v, bool)]
        if len(nums) != len(values) or len(set(nums)) < 2:
            continue
        if best[key] in (min(nums), max(nums)):
            hits.append(key)
    return hits


def grid_search(kind: str, grid: Mapping[str, Sequence], X, y, k: int = 5, seed: int = 0,
                base: Mapping | None = None):
    """Mean validation accuracy for every grid point.

    Returns ``(best_config, table)``; ``table`` has one dict per grid point
    with its hyperparameters, per-fold accuracies and mean.  Ties go to the
    earliest grid point.  Warns with :class:`GridBoundaryWarning` when an
    optimum lies on the edge of a numeric range.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    points = grid_points(grid)
    folds = kfold_split(len(y), k, seed)
    table = []
    best_i, best_acc = 0, -np.inf
    for gi, params in enumerate(points):
        config = make_config(kind, {**(base or {}), **params})
        pseed = _point_seed(seed, gi)
        scores = []
        for train, val in folds:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                model = fit(config, X[train], y[train], seed=pseed)
            scores.append(float(np.mean(model.predict(X[val]) == y[val])))
        mean = float(np.mean(scores))
        table.append({"index": gi, **params, "fold_accuracy": scores, "mean_accuracy": mean})
        if mean > best_acc:
            best_i, best_acc = gi, mean
    best = make_config(kind, {**(base or {}), **points[best_i]})
    hits = boundary_hits(grid, points[best_i])
    if hits:
        warnings.warn(
            f"{kind}: optimum on grid edge for {', '.join(hits)}; widen the range",
            GridBoundaryWarning, stacklevel=2,
        )
    return best, table
