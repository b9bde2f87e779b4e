"""CSV ingestion and synthetic two-class generators."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..core import LabeledDataset


class DatasetError(ValueError):
    pass


def _label_order(labels: set[str]) -> list[str]:
    try:
        return sorted(labels, key=float)
    except ValueError:
        return sorted(labels)


def load_csv(path, name: str | None = None) -> LabeledDataset:
    """Header row, numeric features, class label in the last column."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if any(cell.strip() for cell in r)]
    if not rows:
        raise DatasetError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    if len(header) < 2:
        raise DatasetError(f"{path}: need at least one feature column and a label column")
    if not body:
        raise DatasetError(f"{path}: no data rows")
    X = np.empty((len(body), len(header) - 1))
    raw_labels = []
    for r, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise DatasetError(f"{path}: row {r} has {len(row)} fields, header has {len(header)}")
        for c, cell in enumerate(row[:-1]):
            try:
                X[r - 2, c] = float(cell)
            except ValueError:
                raise DatasetError(
                    f"{path}: row {r}, column {c + 1} ({header[c]!r}): {cell!r} is not numeric"
                ) from None
        raw_labels.append(row[-1].strip())
    if not np.all(np.isfinite(X)):
        bad_r, bad_c = np.argwhere(~np.isfinite(X))[0]
        raise DatasetError(f"{path}: row {bad_r + 2}, column {bad_c + 1} is not finite")
    names = _label_order(set(raw_labels))
    if len(names) < 2:
        raise DatasetError(f"{path}: found {len(names)} class(es); at least 2 are required")
    index = {lab: i for i, lab in enumerate(names)}
    y = np.array([index[lab] for lab in raw_labels])
    return LabeledDataset(X, y, tuple(names), name or path.stem)


def write_csv(data: LabeledDataset, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{i + 1}" for i in range(data.d)] + ["class"])
        for x, yi in zip(data.X, data.y):
            w.writerow([repr(float(v)) for v in x] + [data.class_names[yi]])


def _split(n: int) -> tuple[int, int]:
    return n // 2, n - n // 2


def make_banana(n: int = 2000, noise: float = 0.2, seed: int = 0) -> LabeledDataset:
    """Two interleaved crescents on a unit-radius arc."""
    rng = np.random.default_rng(seed)
    na, nb = _split(n)
    ta = 0.125 * np.pi + rng.random(na) * 1.25 * np.pi
    a = np.column_stack([np.sin(ta), np.cos(ta)]) + rng.normal(scale=noise, size=(na, 2))
    tb = 0.375 * np.pi - rng.random(nb) * 1.25 * np.pi
    b = np.column_stack([np.sin(tb), np.cos(tb)]) + rng.normal(scale=noise, size=(nb, 2)) - 0.75
    X = np.vstack([a, b])
    y = np.r_[np.zeros(na, int), np.ones(nb, int)]
    return LabeledDataset(X, y, ("A", "B"), "banana")


def make_spirals(n: int = 2000, turns: float = 1.5, noise: float = 0.05, seed: int = 0) -> LabeledDataset:
    rng = np.random.default_rng(seed)
    na, nb = _split(n)
    parts = []
    for k, size in enumerate((na, nb)):
        t = np.sqrt(rng.random(size)) * turns * 2 * np.pi
        r = t / (turns * 2 * np.pi)
        ang = t + k * np.pi
        parts.append(np.column_stack([r * np.cos(ang), r * np.sin(ang)]) + rng.normal(scale=noise, size=(size, 2)))
    y = np.r_[np.zeros(na, int), np.ones(nb, int)]
    return LabeledDataset(np.vstack(parts), y, ("A", "B"), "spirals")


def make_gaussians(
    n: int = 800, d: int = 2, separation: float = 2.0, n_classes: int = 2, seed: int = 0
) -> LabeledDataset:
    """Isotropic unit-variance clouds with centres spaced ``separation`` apart on the first axis."""
    rng = np.random.default_rng(seed)
    sizes = [n // n_classes + (1 if i < n % n_classes else 0) for i in range(n_classes)]
    X, y = [], []
    for c, size in enumerate(sizes):
        centre = np.zeros(d)
        centre[0] = c * separation
        X.append(rng.normal(size=(size, d)) + centre)
        y.append(np.full(size, c))
    names = tuple(f"C{c}" for c in range(n_classes))
    return LabeledDataset(np.vstack(X), np.concatenate(y), names, "gauss")


GENERATORS = {"banana": make_banana, "spirals": make_spirals, "gauss": make_gaussians}


def generate(kind: str, **kwargs) -> LabeledDataset:
    try:
        gen = GENERATORS[kind]
    except KeyError:
        raise DatasetError(f"unknown generator {kind!r}; expected one of {sorted(GENERATORS)}") from None
    return gen(**kwargs)
