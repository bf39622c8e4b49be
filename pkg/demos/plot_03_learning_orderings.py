"""
Learning to pick an ordering
=============================

A synthetic corpus stands in for timed benchmark problems: its fastest
ordering follows a hidden rule on the degree features, with 10% of labels
scrambled.  We fit all four classifiers with cross-validated grid search and
compare them against the heuristics on held-out problems.
"""

import warnings

import numpy as np

from cadorder.cli import method_predictions
from cadorder.evaluation import report
from cadorder.features import extract_features, fit_standardizer
from cadorder.harness import split
from cadorder.learners import GridBoundaryWarning, fit, grid_search
from cadorder.synthetic import synthetic_corpus

# small problems keep the sotd projections cheap
entries = synthetic_corpus(400, seed=7, max_polys=3, max_degree=3)
train, test = split(entries, 0.75, seed=7)
print(len(train), "training and", len(test), "test problems")

# standardize with training statistics only
X_raw = np.vstack([extract_features(e.problem) for e in train])
y = np.array([e.target for e in train])
std = fit_standardizer(X_raw)
X = std.transform(X_raw)

grids = {
    "dt": {"criterion": ["gini", "entropy"], "max_depth": [2, 4, 6, 9, 13]},
    "knn": {"k": [1, 5, 9, 15, 25], "weighting": ["uniform", "distance"]},
    "mlp": {"hidden_size": [6, 18, 30], "alpha": [5e-6, 5e-5, 5e-4]},
    "svm": {"C": [10, 100, 316, 1000], "gamma": [0.025, 0.08, 0.25]},
}
models = []
for kind, grid in grids.items():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", GridBoundaryWarning)
        best, table = grid_search(kind, grid, X, y, k=5, seed=7)
    top = max(row["mean_accuracy"] for row in table)
    print(f"{kind}: CV accuracy {100 * top:.1f}% with {best}")
    for w in caught:
        if issubclass(w.category, GridBoundaryWarning):
            print("   ", w.message)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        models.append(fit(best, X, y, seed=7, standardizer=std))

# the random column averages over all six orderings, i.e. its expectation
preds = method_predictions(test, models, ["brown", "sotd", "random"], seed=7)
result = report(preds, {e.id: e.target_set for e in test}, {e.id: e.timings for e in test})
print()
print(result.to_markdown())

# share of test problems solved within 20% of the best possible time
hist = result.histograms
for method in result.methods:
    near = sum(c for edge, c in hist[method].items() if edge < 20)
    print(f"{method:7s} within 20% of the minimum on {100 * near / len(test):.0f}% of problems")
