"""Fitted-model container, dispatch over model kinds, JSON persistence."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from ..features import Standardizer
from .knn import KNNClassifier, KNNConfig
from .mlp import MLPClassifier, MLPConfig
from .svm import SVMClassifier, SVMConfig
from .tree import DecisionTreeClassifier, DTConfig

MODEL_FORMAT = "cadorder-model"
MODEL_VERSION = 1

KINDS = {
    "knn": (KNNConfig, KNNClassifier),
    "dt": (DTConfig, DecisionTreeClassifier),
    "mlp": (MLPConfig, MLPClassifier),
    "svm": (SVMConfig, SVMClassifier),
}
_KIND_OF_CONFIG = {cfg: kind for kind, (cfg, _) in KINDS.items()}


class ModelFormatError(ValueError):
    pass


def make_config(kind: str, params: Mapping[str, Any] | None = None):
    try:
        cls = KINDS[kind][0]
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}; choose from {sorted(KINDS)}") from None
    return cls(**dict(params or {}))


def kind_of(config) -> str:
    return _KIND_OF_CONFIG[type(config)]


def dataset_hash(X, y) -> str:
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(X, dtype=np.float64).tobytes())
    h.update(np.ascontiguousarray(y, dtype=np.int64).tobytes())
    return h.hexdigest()


@dataclass
class TrainedModel:
    kind: str
    config: Any
    estimator: Any
    standardizer: Standardizer | None = None
    metadata: dict = field(default_factory=dict)

    def predict(self, X) -> np.ndarray:
        """Predict from already-standardized feature rows."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if not np.all(np.isfinite(X)):
            raise ValueError("non-finite feature values")
        return self.estimator.predict(X)

    def predict_raw(self, X) -> np.ndarray:
        """Standardize with the stored training statistics, then predict."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.standardizer is not None:
            X = self.standardizer.transform(X)
        return self.predict(X)

    def to_dict(self) -> dict:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "kind": self.kind,
            "config": dataclasses.asdict(self.config),
            "standardizer": self.standardizer.to_dict() if self.standardizer is not None else None,
            "parameters": self.estimator.get_state(),
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_dict(cls, doc: Mapping) -> "TrainedModel":
        if doc.get("format") != MODEL_FORMAT:
            raise ModelFormatError("not a cadorder model document")
        if doc.get("version") != MODEL_VERSION:
            raise ModelFormatError(
                f"model version {doc.get('version')!r} does not match supported version {MODEL_VERSION}")
        kind = doc["kind"]
        cfg_cls, est_cls = KINDS[kind]
        config = cfg_cls(**doc["config"])
        est = est_cls.from_state(config, doc["parameters"])
        std = Standardizer.from_dict(doc["standardizer"]) if doc.get("standardizer") else None
        return cls(kind, config, est, std, dict(doc.get("metadata", {})))

    @classmethod
    def from_json(cls, text: str) -> "TrainedModel":
        return cls.from_dict(json.loads(text))


def fit(config, X, y, seed: int = 0, standardizer: Standardizer | None = None,
        metadata: Mapping | None = None) -> TrainedModel:
    """Train the estimator matching ``config`` on standardized rows."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or len(X) != len(y) or len(y) == 0:
        raise ValueError("need a non-empty feature matrix with one label per row")
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite feature values")
    kind = kind_of(config)
    est = KINDS[kind][1](config).fit(X, y, seed=seed)
    meta = {"train_hash": dataset_hash(X, y), "seed": seed, "n_train": int(len(y))}
    if kind in ("mlp", "svm"):
        meta["converged"] = bool(est.converged_)
    meta.update(metadata or {})
    return TrainedModel(kind, config, est, standardizer, meta)


def predict(model: TrainedModel, v) -> int:
    """Single ordering for one standardized feature vector."""
    return int(model.predict(np.asarray(v, dtype=float)[None, :])[0])


def save_model(model: TrainedModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model.to_json())


def load_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        return TrainedModel.from_json(fh.read())
