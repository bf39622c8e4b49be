"""The four classifiers, cross-validation and grid search."""

from .knn import BallTree, KNNClassifier, KNNConfig, brute_query
from .mlp import MLPClassifier, MLPConfig
from .model import (
    KINDS,
    MODEL_VERSION,
    ModelFormatError,
    TrainedModel,
    fit,
    load_model,
    make_config,
    predict,
    save_model,
)
from .selection import GridBoundaryWarning, grid_search, kfold_split
from .svm import SVMClassifier, SVMConfig, rbf_kernel
from .tree import DecisionTreeClassifier, DTConfig, entropy, gini

# centred on the tuned values reported for the nlsat experiments
DEFAULT_GRIDS = {
    "dt": {"criterion": ["gini", "entropy"], "max_depth": [3, 5, 7, 9, 13, 17, 25]},
    "knn": {"k": [1, 3, 5, 7, 9, 11, 15, 21, 31], "weighting": ["uniform", "distance"], "algorithm": ["ball_tree"]},
    "mlp": {
        "hidden_size": [6, 12, 18, 24, 30],
        "activation": ["tanh", "relu", "logistic"],
        "alpha": [5e-6, 5e-5, 5e-4],
    },
    "svm": {"C": [31.6, 100.0, 316.0, 1000.0, 3160.0], "gamma": [0.008, 0.025, 0.08, 0.25, 0.8], "tol": [0.0316]},
}

__all__ = [
    "BallTree", "KNNClassifier", "KNNConfig", "brute_query",
    "MLPClassifier", "MLPConfig", "SVMClassifier", "SVMConfig", "rbf_kernel",
    "DecisionTreeClassifier", "DTConfig", "gini", "entropy",
    "KINDS", "MODEL_VERSION", "ModelFormatError", "TrainedModel", "fit", "predict",
    "load_model", "save_model", "make_config",
    "GridBoundaryWarning", "grid_search", "kfold_split", "DEFAULT_GRIDS",
]
