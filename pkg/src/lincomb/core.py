"""Feature-space primitives: datasets, hyperplanes and the sign decision rule.

Functions accept either a single vector of shape ``(d,)`` or a stack of
vectors of shape ``(n, d)``; the latter returns one value per row.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class DimensionError(ValueError):
    """Vector lengths do not agree."""


class DegenerateInputError(ValueError):
    """Input cannot define the requested geometric object (zero normal, coincident centroids...)."""


def _as_vector(a) -> np.ndarray:
    return np.asarray(a, dtype=np.float64)


def _check_dims(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise DimensionError(f"dimension mismatch: {a.shape[-1]} != {b.shape[-1]}")


def dot(a, b) -> float | np.ndarray:
    a, b = _as_vector(a), _as_vector(b)
    _check_dims(a, b)
    return a @ b if b.ndim == 1 else np.sum(a * b, axis=-1)


def norm(x) -> float:
    x = _as_vector(x)
    return float(np.sqrt(x @ x))


def sign(values) -> np.ndarray | int:
    """Sign with sign(0) = +1, so every discriminant maps to a class."""
    v = np.asarray(values)
    out = np.where(v >= 0, 1, -1)
    return int(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LinearModel:
    """Hyperplane ``<normal, x> + offset = 0`` with a unit normal.

    The constructor rescales ``(normal, offset)`` jointly so trainers can hand
    over unnormalised weights. ``converged`` is diagnostic only.
    """

    normal: np.ndarray
    offset: float
    converged: bool = field(default=True, compare=False)

    def __post_init__(self):
        n = _as_vector(self.normal).ravel()
        if not np.all(np.isfinite(n)) or not np.isfinite(self.offset):
            raise DegenerateInputError("non-finite hyperplane coefficients")
        length = float(np.sqrt(n @ n))
        if length == 0.0:
            raise DegenerateInputError("zero normal vector")
        n = n / length
        n.setflags(write=False)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset) / length)

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def __eq__(self, other):
        if not isinstance(other, LinearModel):
            return NotImplemented
        return np.array_equal(self.normal, other.normal) and self.offset == other.offset

    def __hash__(self):
        return hash((self.normal.tobytes(), self.offset))


def discriminant(m: LinearModel, x) -> float | np.ndarray:
    """Signed distance of ``x`` to the plane of ``m``."""
    x = _as_vector(x)
    _check_dims(x, m.normal)
    out = x @ m.normal + m.offset
    return float(out) if np.ndim(out) == 0 else out


def classify(m: LinearModel, x):
    return sign(discriminant(m, x))


def project_onto_normal(v, n) -> np.ndarray:
    """Orthogonal projection of ``v`` onto the line spanned by ``n``."""
    v, n = _as_vector(v), _as_vector(n)
    _check_dims(v, n)
    nn = float(n @ n)
    if nn == 0.0:
        raise DegenerateInputError("cannot project onto a zero vector")
    coef = (v @ n) / nn
    return np.multiply.outer(coef, n) if np.ndim(coef) else coef * n


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix with integer class indices into ``class_names``."""

    X: np.ndarray
    y: np.ndarray
    class_names: tuple = ()
    name: str = ""

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int64).ravel()
        if X.ndim != 2:
            raise DimensionError(f"feature matrix must be 2-D, got shape {X.shape}")
        if X.shape[0] != y.shape[0]:
            raise DimensionError(f"{X.shape[0]} feature rows but {y.shape[0]} labels")
        if X.shape[0] < 2:
            raise ValueError("a dataset needs at least 2 instances")
        if not np.all(np.isfinite(X)):
            raise ValueError("feature matrix contains NaN or Inf")
        names = tuple(self.class_names) or tuple(range(int(y.max()) + 1))
        if y.min() < 0 or y.max() >= len(names):
            raise ValueError("class index out of range of class_names")
        if np.unique(y).size < 2:
            raise ValueError("a dataset needs at least 2 distinct classes")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "class_names", names)

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.y, minlength=self.n_classes)

    def subset(self, idx) -> "LabeledDataset":
        return LabeledDataset(self.X[idx], self.y[idx], self.class_names, self.name)

    def with_features(self, X) -> "LabeledDataset":
        return LabeledDataset(X, self.y, self.class_names, self.name)

    def signed_labels(self) -> np.ndarray:
        """Binary labels in {-1, +1}; class index 1 is the positive class."""
        if self.n_classes != 2:
            raise ValueError(f"binary view requires 2 classes, dataset has {self.n_classes}")
        return np.where(self.y == 1, 1, -1)

    def imbalance_ratio(self) -> float:
        """Mean over classes of (largest class size / class size)."""
        counts = self.class_counts()
        counts = counts[counts > 0]
        return float(np.mean(counts.max() / counts))

    def summary(self) -> dict:
        return {
            "name": self.name,
            "instances": len(self),
            "d": self.d,
            "classes": self.n_classes,
            "IR": round(self.imbalance_ratio(), 2),
        }


def binary_dataset(X: Sequence, labels: Sequence[int], name: str = "") -> LabeledDataset:
    """Build a two-class dataset from +/-1 labels (+1 becomes class index 1)."""
    labels = np.asarray(labels)
    if not np.all(np.isin(labels, (-1, 1))):
        raise ValueError("binary labels must be -1 or +1")
    return LabeledDataset(np.asarray(X, dtype=float), (labels == 1).astype(int), (-1, 1), name)
