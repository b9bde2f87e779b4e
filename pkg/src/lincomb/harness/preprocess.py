"""Standardise -> PCA -> re-standardise, fitted on training rows only."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

_ZERO_VAR = 1e-12


@dataclass(frozen=True)
class Preprocessor:
    keep: np.ndarray
    mean: np.ndarray
    scale: np.ndarray
    components: np.ndarray
    component_scale: np.ndarray
    explained_ratio: np.ndarray

    @property
    def n_components(self) -> int:
        return self.components.shape[1]

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        Z = (X[:, self.keep] - self.mean) / self.scale
        return (Z @ self.components) / self.component_scale


def fit_preprocessor(X, pca_variance: float = 0.95) -> Preprocessor:
    """Smallest number of components whose cumulative explained variance reaches ``pca_variance``."""
    if not 0.0 < pca_variance <= 1.0:
        raise ValueError("pca_variance must lie in (0, 1]")
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] < 1:
        raise ValueError("need a 2-D feature matrix with at least one column")
    std = X.std(axis=0)
    keep = np.flatnonzero(std > _ZERO_VAR * max(1.0, float(np.abs(X).max(initial=0.0))))
    dropped = np.setdiff1d(np.arange(X.shape[1]), keep)
    if dropped.size:
        log.warning("dropping zero-variance attribute(s) %s", dropped.tolist())
    if keep.size == 0:
        raise ValueError("every attribute has zero variance")
    mean, scale = X[:, keep].mean(axis=0), std[keep]
    Z = (X[:, keep] - mean) / scale
    _, s, vt = np.linalg.svd(Z, full_matrices=False)
    var = s ** 2
    ratio = var / var.sum()
    rank = int(np.sum(var > 1e-12 * var[0]))
    k = int(np.searchsorted(np.cumsum(ratio), pca_variance - 1e-12) + 1)
    k = min(k, rank)
    comps = vt[:k].T
    # fix the sign of each component so refits are reproducible
    flip = np.sign(comps[np.argmax(np.abs(comps), axis=0), np.arange(k)])
    comps = comps * flip
    proj_std = (Z @ comps).std(axis=0)
    proj_std[proj_std <= _ZERO_VAR] = 1.0
    return Preprocessor(keep, mean, scale, comps, proj_std, ratio[:k])
