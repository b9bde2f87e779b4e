"""Class-conditional statistics and the two bounded potential transforms.

``pf_transform`` is the symmetric, score-only transform; ``class_potential``
and ``pc_discriminant`` build a class-specific potential from the Mahalanobis
distance to the class centroid and the 1-D Mahalanobis distance along the
plane normal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DimensionError, LabeledDataset, LinearModel

REG_SCALE = 1e-6


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class PotentialParams:
    beta: float
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")


@dataclass(frozen=True)
class ZetaParam:
    zeta: float

    def __post_init__(self):
        if not self.zeta > 0:
            raise ValueError(f"zeta must be positive, got {self.zeta}")


@dataclass(frozen=True)
class ClassGeometry:
    centroid: np.ndarray
    cov_inverse: np.ndarray
    normal_var_inverse: float
    class_label: int

    def __post_init__(self):
        c = np.asarray(self.centroid, dtype=float)
        s = np.asarray(self.cov_inverse, dtype=float)
        if s.shape != (c.size, c.size):
            raise DimensionError(f"cov_inverse shape {s.shape} does not match centroid length {c.size}")
        if not np.all(np.isfinite(c)):
            raise GeometryError("centroid is not finite")
        if not np.allclose(s, s.T, rtol=0, atol=1e-9):
            raise GeometryError("cov_inverse is not symmetric")
        if not self.normal_var_inverse > 0:
            raise GeometryError("normal_var_inverse must be positive")
        if self.class_label not in (-1, 1):
            raise GeometryError("class_label must be -1 or +1")
        s = (s + s.T) / 2.0
        c.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "centroid", c)
        object.__setattr__(self, "cov_inverse", s)
        object.__setattr__(self, "normal_var_inverse", float(self.normal_var_inverse))


def _class_points(data: LabeledDataset, m: int) -> np.ndarray:
    if m not in (-1, 1):
        raise ValueError("class label must be -1 or +1")
    return data.X[data.signed_labels() == m]


def class_centroid(data: LabeledDataset, m: int) -> np.ndarray:
    pts = _class_points(data, m)
    if pts.shape[0] == 0:
        raise GeometryError(f"class {m:+d} is empty")
    return pts.mean(axis=0)


def regularized_covariance(points: np.ndarray) -> np.ndarray:
    """Sample covariance (1/(k-1)) with a small ridge, safe to invert.

    Fewer than d+1 points fall back to the diagonal; any zero variance there
    falls back to the identity.
    """
    k, d = points.shape
    if k < 2:
        raise GeometryError("covariance needs at least 2 points")
    cov = np.atleast_2d(np.cov(points, rowvar=False, ddof=1))
    if k < d + 1:
        var = np.diag(cov)
        if np.any(var <= 0):
            return np.eye(d)
        cov = np.diag(var)
    tr = np.trace(cov)
    if tr <= 0:
        return np.eye(d)
    return cov + (REG_SCALE * tr / d) * np.eye(d)


def _regularized_variance(values: np.ndarray) -> float:
    var = float(np.var(values, ddof=1))
    if var <= 0:
        return 1.0
    return var * (1.0 + REG_SCALE)


def fit_class_geometry(data: LabeledDataset, m: int, model: LinearModel) -> ClassGeometry:
    pts = _class_points(data, m)
    if pts.shape[0] < 2:
        raise GeometryError(f"class {m:+d} has {pts.shape[0]} instance(s); geometry needs at least 2")
    if pts.shape[1] != model.dim:
        raise DimensionError(f"data dimension {pts.shape[1]} != model dimension {model.dim}")
    centroid = pts.mean(axis=0)
    cov = regularized_covariance(pts)
    try:
        cov_inv = np.linalg.inv(cov)
    except np.linalg.LinAlgError as exc:
        raise GeometryError(f"covariance of class {m:+d} is singular") from exc
    cov_inv = (cov_inv + cov_inv.T) / 2.0
    if np.linalg.eigvalsh(cov_inv).min() <= 0:
        raise GeometryError(f"covariance of class {m:+d} is not positive definite")
    proj = (pts - centroid) @ model.normal
    return ClassGeometry(centroid, cov_inv, 1.0 / _regularized_variance(proj), m)


def fit_geometry_pair(data: LabeledDataset, model: LinearModel) -> tuple[ClassGeometry, ClassGeometry]:
    """Geometries for classes (-1, +1), in that order."""
    return fit_class_geometry(data, -1, model), fit_class_geometry(data, 1, model)


def _offsets(g: ClassGeometry, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != g.centroid.size:
        raise DimensionError(f"point dimension {x.shape[-1]} != geometry dimension {g.centroid.size}")
    return x - g.centroid


def mahalanobis_dc_sq(g: ClassGeometry, x):
    diff = _offsets(g, x)
    out = np.einsum("...i,ij,...j->...", diff, g.cov_inverse, diff)
    return np.maximum(out, 0.0)


def mahalanobis_dc(g: ClassGeometry, x):
    out = np.sqrt(mahalanobis_dc_sq(g, x))
    return float(out) if np.ndim(out) == 0 else out


def normal_distance_dn_sq(g: ClassGeometry, x, model: LinearModel):
    diff = _offsets(g, x)
    if model.dim != g.centroid.size:
        raise DimensionError("model and geometry dimensions differ")
    t = diff @ model.normal
    return t * t * g.normal_var_inverse


def normal_distance_dn(g: ClassGeometry, x, model: LinearModel):
    out = np.sqrt(normal_distance_dn_sq(g, x, model))
    return float(out) if np.ndim(out) == 0 else out


def potential_from_distances(dc_sq, dn_sq, p: PotentialParams):
    """Mix of two Gaussian bumps; far from the data the value underflows to 0."""
    return p.beta * np.exp(-p.gamma * dc_sq) + (1.0 - p.beta) * np.exp(-p.gamma * dn_sq)


def log_potential_from_distances(dc_sq, dn_sq, p: PotentialParams):
    """Natural log of :func:`potential_from_distances`, finite wherever the distances are."""
    with np.errstate(divide="ignore"):
        a = np.log(p.beta) - p.gamma * np.asarray(dc_sq)
        b = np.log(1.0 - p.beta) - p.gamma * np.asarray(dn_sq)
    return np.logaddexp(a, b)


def log_class_potential(g: ClassGeometry, x, model: LinearModel, p: PotentialParams):
    return log_potential_from_distances(mahalanobis_dc_sq(g, x), normal_distance_dn_sq(g, x, model), p)


def class_potential(g: ClassGeometry, x, model: LinearModel, p: PotentialParams):
    out = potential_from_distances(mahalanobis_dc_sq(g, x), normal_distance_dn_sq(g, x, model), p)
    return float(out) if np.ndim(out) == 0 else out


def pc_discriminant(geoms, x, model: LinearModel, p: PotentialParams):
    """Potential of class +1 minus potential of class -1, in [-1, 1]."""
    by_label = {g.class_label: g for g in geoms}
    if set(by_label) != {-1, 1}:
        raise GeometryError("pc_discriminant needs one geometry for each of the classes -1 and +1")
    out = class_potential(by_label[1], x, model, p) - class_potential(by_label[-1], x, model, p)
    return float(out) if np.ndim(out) == 0 else out


def pf_transform(z, zp: ZetaParam | float):
    """Odd bump with peaks of +/-1 at z = +/-1/sqrt(2*zeta)."""
    zeta = zp.zeta if isinstance(zp, ZetaParam) else float(zp)
    if not zeta > 0:
        raise ValueError("zeta must be positive")
    z = np.asarray(z, dtype=float)
    out = z * np.exp(-zeta * z * z + 0.5) * np.sqrt(2.0 * zeta)
    return float(out) if out.ndim == 0 else out
