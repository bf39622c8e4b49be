"""One-hidden-layer perceptron trained full-batch with L-BFGS.

Loss is mean softmax cross-entropy plus ``0.5 * alpha * ||W||^2 / n`` over
the two weight matrices (biases unregularized).  Parameters travel as one
flat vector laid out ``W1, b1, W2, b2``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

ACTIVATIONS = ("identity", "logistic", "tanh", "relu")


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class MLPConfig:
    hidden_size: int = 18
    activation: str = "tanh"
    alpha: float = 5e-5
    max_iter: int = 500
    tol: float = 1e-6

    def __post_init__(self):
        if self.hidden_size < 1:
            raise ValueError("hidden_size must be positive")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")


def _act(z, kind):
    if kind == "identity":
        return z
    if kind == "logistic":
        return 0.5 * (1.0 + np.tanh(0.5 * z))
    if kind == "tanh":
        return np.tanh(z)
    return np.maximum(z, 0.0)


def _act_grad(z, a, kind):
    # derivative of the activation, given pre-activation z and output a
    if kind == "identity":
        return np.ones_like(z)
    if kind == "logistic":
        return a * (1.0 - a)
    if kind == "tanh":
        return 1.0 - a * a
    return (z > 0).astype(float)


def param_shapes(n_in: int, hidden: int, n_out: int):
    return [(n_in, hidden), (hidden,), (hidden, n_out), (n_out,)]


def unpack(theta: np.ndarray, shapes):
    out, pos = [], 0
    for s in shapes:
        size = int(np.prod(s))
        out.append(theta[pos:pos + size].reshape(s))
        pos += size
    return out


def init_params(n_in: int, hidden: int, n_out: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    parts = []
    for fan_in, shape in ((n_in, (n_in, hidden)), (n_in, (hidden,)),
                          (hidden, (hidden, n_out)), (hidden, (n_out,))):
        bound = 1.0 / np.sqrt(fan_in)
        parts.append(rng.uniform(-bound, bound, size=shape).ravel())
    return np.concatenate(parts)


def forward(theta, X, shapes, activation):
    W1, b1, W2, b2 = unpack(theta, shapes)
    z1 = X @ W1 + b1
    a1 = _act(z1, activation)
    z2 = a1 @ W2 + b2
    z2 = z2 - z2.max(axis=1, keepdims=True)
    e = np.exp(z2)
    prob = e / e.sum(axis=1, keepdims=True)
    return z1, a1, z2, prob


def loss_and_grad(theta, X, Y, shapes, activation, alpha):
    """Regularized cross-entropy and its gradient; ``Y`` is one-hot."""
    n = X.shape[0]
    W1, b1, W2, b2 = unpack(theta, shapes)
    z1, a1, z2, prob = forward(theta, X, shapes, activation)
    logp = z2 - np.log(np.exp(z2).sum(axis=1, keepdims=True))
    loss = -np.sum(Y * logp) / n + 0.5 * alpha * (np.sum(W1 * W1) + np.sum(W2 * W2)) / n
    d2 = (prob - Y) / n
    gW2 = a1.T @ d2 + alpha * W2 / n
    gb2 = d2.sum(axis=0)
    d1 = (d2 @ W2.T) * _act_grad(z1, a1, activation)
    gW1 = X.T @ d1 + alpha * W1 / n
    gb1 = d1.sum(axis=0)
    return loss, np.concatenate([gW1.ravel(), gb1, gW2.ravel(), gb2])


class MLPClassifier:
    def __init__(self, config: MLPConfig = MLPConfig()):
        self.config = config

    def fit(self, X, y, seed: int = 0) -> "MLPClassifier":
        cfg = self.config
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        self.classes_ = np.unique(y)
        yi = np.searchsorted(self.classes_, y)
        n_out = len(self.classes_)
        Y = np.zeros((len(y), n_out))
        Y[np.arange(len(y)), yi] = 1.0
        self.shapes_ = param_shapes(X.shape[1], cfg.hidden_size, n_out)
        theta0 = init_params(X.shape[1], cfg.hidden_size, n_out, seed)
        self.loss_curve_ = [float(loss_and_grad(theta0, X, Y, self.shapes_, cfg.activation, cfg.alpha)[0])]

        def record(intermediate_result):
            self.loss_curve_.append(float(intermediate_result.fun))

        res = minimize(
            loss_and_grad, theta0, args=(X, Y, self.shapes_, cfg.activation, cfg.alpha),
            jac=True, method="L-BFGS-B", callback=record,
            options={"maxiter": cfg.max_iter, "gtol": cfg.tol, "ftol": 1e-12},
        )
        self.theta_ = res.x
        self.n_iter_ = int(res.nit)
        self.converged_ = bool(res.success)
        if not self.converged_:
            warnings.warn(f"MLP stopped without converging: {res.message}", ConvergenceWarning, stacklevel=2)
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return forward(self.theta_, X, self.shapes_, self.config.activation)[3]

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]

    def get_state(self) -> dict:
        return {
            "classes": self.classes_.tolist(),
            "n_in": self.shapes_[0][0],
            "theta": self.theta_.tolist(),
            "n_iter": self.n_iter_,
            "converged": self.converged_,
        }

    @classmethod
    def from_state(cls, config: MLPConfig, state: dict) -> "MLPClassifier":
        obj = cls(config)
        obj.classes_ = np.asarray(state["classes"], dtype=int)
        obj.shapes_ = param_shapes(state["n_in"], config.hidden_size, len(obj.classes_))
        obj.theta_ = np.asarray(state["theta"], dtype=float)
        obj.n_iter_ = state["n_iter"]
        obj.converged_ = state["converged"]
        obj.loss_curve_ = []
        return obj
