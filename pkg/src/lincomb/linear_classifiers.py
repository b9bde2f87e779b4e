"""Trainers producing a :class:`LinearModel` from a two-class dataset."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, log_expit

from .core import DegenerateInputError, LabeledDataset, LinearModel

KINDS = ("FLDA", "LR", "MLP", "NC", "SVM")


class TrainingError(ValueError):
    pass


@dataclass(frozen=True)
class TrainerConfig:
    """Base learner selection and hyper-parameters.

    ``regularization`` is the ridge penalty for LR and the soft-margin C for
    SVM; when left as ``None`` the learner default is used.
    """

    kind: str = "NC"
    max_iters: int = 500
    learning_rate: float = 0.1
    regularization: float | None = None
    seed: int = 0

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in KINDS:
            raise ValueError(f"unknown base learner {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.regularization is not None and self.regularization < 0:
            raise ValueError("regularization must be >= 0")

    def reg(self, default: float) -> float:
        return default if self.regularization is None else self.regularization


def _binary(data: LabeledDataset, min_per_class: int = 1):
    y = data.signed_labels()
    for label in (-1, 1):
        count = int(np.sum(y == label))
        if count < min_per_class:
            raise TrainingError(
                f"class {label:+d} has {count} instance(s); at least {min_per_class} required"
            )
    return data.X, y


def _to_model(w: np.ndarray, b: float, converged: bool = True) -> LinearModel:
    try:
        return LinearModel(w, b, converged=converged)
    except DegenerateInputError as exc:
        raise TrainingError(f"trainer produced a degenerate plane: {exc}") from exc


def train_flda(data: LabeledDataset) -> LinearModel:
    X, y = _binary(data, min_per_class=2)
    pos, neg = X[y == 1], X[y == -1]
    mu_pos, mu_neg = pos.mean(axis=0), neg.mean(axis=0)
    cp, cn = pos - mu_pos, neg - mu_neg
    sw = cp.T @ cp + cn.T @ cn
    d = X.shape[1]
    lam = 1e-6 * np.trace(sw) / d
    if lam == 0.0:
        lam = 1e-6
    w = np.linalg.solve(sw + lam * np.eye(d), mu_pos - mu_neg)
    return _to_model(w, -w @ (mu_pos + mu_neg) / 2.0)


def train_nearest_centroid(data: LabeledDataset) -> LinearModel:
    """Perpendicular bisector of the two class centroids."""
    X, y = _binary(data, min_per_class=2)
    c_pos, c_neg = X[y == 1].mean(axis=0), X[y == -1].mean(axis=0)
    w = c_pos - c_neg
    if not np.any(w):
        raise TrainingError("class centroids coincide; bisector plane is undefined")
    return _to_model(w, -w @ (c_pos + c_neg) / 2.0)


def train_logistic(data: LabeledDataset, cfg: TrainerConfig = TrainerConfig("LR")) -> LinearModel:
    """L2-penalised maximum likelihood fitted with L-BFGS; the intercept is not penalised."""
    X, y = _binary(data)
    ridge = cfg.reg(1e-8)
    Xa = np.hstack([X, np.ones((X.shape[0], 1))])

    def objective(theta):
        z = y * (Xa @ theta)
        w = theta[:-1]
        loss = -np.sum(log_expit(z)) + 0.5 * ridge * (w @ w)
        grad = -Xa.T @ (y * expit(-z))
        grad[:-1] += ridge * w
        return loss, grad

    res = minimize(
        objective, np.zeros(Xa.shape[1]), jac=True, method="L-BFGS-B",
        options={"maxiter": cfg.max_iters},
    )
    theta = res.x
    return _to_model(theta[:-1], theta[-1], converged=bool(res.success))


def train_mlp(data: LabeledDataset, cfg: TrainerConfig = TrainerConfig("MLP")) -> LinearModel:
    """One sigmoid unit without hidden layer, mini-batch SGD on log loss.

    ``max_iters`` counts epochs; the step size decays as ``learning_rate / t``.
    Weights start at zero (the loss is convex), the seed drives batch order.
    """
    X, y = _binary(data)
    t01 = (y + 1) / 2.0
    rng = np.random.default_rng(cfg.seed)
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    batch = 32
    prev_loss = np.inf
    converged = False
    for epoch in range(1, cfg.max_iters + 1):
        eta = cfg.learning_rate / epoch
        order = rng.permutation(n)
        for start in range(0, n, batch):
            idx = order[start:start + batch]
            err = expit(X[idx] @ w + b) - t01[idx]
            w -= eta * (X[idx].T @ err) / idx.size
            b -= eta * err.mean()
        z = y * (X @ w + b)
        loss = -np.mean(log_expit(z))
        if abs(prev_loss - loss) < 1e-7:
            converged = True
            break
        prev_loss = loss
    return _to_model(w, b, converged=converged)


def train_linear_svm(data: LabeledDataset, cfg: TrainerConfig = TrainerConfig("SVM")) -> LinearModel:
    """Soft-margin L1-loss SVM via dual coordinate descent.

    The bias is handled as an extra constant feature, so it is regularised
    together with the weights.
    """
    X, y = _binary(data)
    C = cfg.reg(1.0)
    if C == 0.0:
        raise TrainingError("C = 0 forces a zero weight vector; no plane can be exported")
    rng = np.random.default_rng(cfg.seed)
    Xa = np.hstack([X, np.ones((X.shape[0], 1))])
    q = np.einsum("ij,ij->i", Xa, Xa)
    n = Xa.shape[0]
    alpha = np.zeros(n)
    w = np.zeros(Xa.shape[1])
    ys = y.tolist()
    converged = False
    for _ in range(cfg.max_iters):
        pg_max, pg_min = -np.inf, np.inf
        for i in rng.permutation(n):
            xi = Xa[i]
            g = ys[i] * (w @ xi) - 1.0
            a = alpha[i]
            if a == 0.0:
                pg = min(g, 0.0)
            elif a == C:
                pg = max(g, 0.0)
            else:
                pg = g
            pg_max, pg_min = max(pg_max, pg), min(pg_min, pg)
            if pg != 0.0:
                new = min(max(a - g / q[i], 0.0), C)
                w += (new - a) * ys[i] * xi
                alpha[i] = new
        if pg_max - pg_min < 1e-3:
            converged = True
            break
    return _to_model(w[:-1], w[-1], converged=converged)


def train(data: LabeledDataset, cfg: TrainerConfig) -> LinearModel:
    if cfg.kind == "FLDA":
        return train_flda(data)
    if cfg.kind == "NC":
        return train_nearest_centroid(data)
    if cfg.kind == "LR":
        return train_logistic(data, cfg)
    if cfg.kind == "MLP":
        return train_mlp(data, cfg)
    return train_linear_svm(data, cfg)
