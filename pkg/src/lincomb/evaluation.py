"""One-vs-rest confusion counts, macro/micro losses, Cohen's kappa and parameter tuning."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .combiners import BagSpec, OvoModel, ovo_predict, ovo_train
from .core import LabeledDataset
from .geometry import PotentialParams, ZetaParam
from .linear_classifiers import TrainerConfig

log = logging.getLogger(__name__)

BETAS = tuple(round(0.1 * i, 1) for i in range(11))
GAMMAS = tuple(2.0 ** p for p in range(-2, 3))
LOSS_NAMES = ("macro_fdr", "macro_fnr", "macro_f1_loss", "micro_fdr", "micro_fnr", "micro_f1_loss")
CRITERIA = LOSS_NAMES + ("kappa",)


@dataclass(frozen=True)
class ConfusionCounts:
    """Per-class one-vs-rest counts; row ``i`` belongs to ``classes[i]``."""

    classes: tuple
    tp: np.ndarray
    tn: np.ndarray
    fp: np.ndarray
    fn: np.ndarray

    @property
    def total(self) -> int:
        return int(self.tp[0] + self.tn[0] + self.fp[0] + self.fn[0])


@dataclass(frozen=True)
class MetricSet:
    macro_fdr: float
    macro_fnr: float
    macro_f1_loss: float
    micro_fdr: float
    micro_fnr: float
    micro_f1_loss: float
    kappa: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in CRITERIA}


@dataclass(frozen=True)
class GridSpec:
    betas: tuple = BETAS
    gammas: tuple = GAMMAS
    inner_folds: int = 3

    def __post_init__(self):
        if not self.betas or not self.gammas:
            raise ValueError("grid axes must be non-empty")
        if self.inner_folds < 2:
            raise ValueError("inner_folds must be >= 2")
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))

    def cells(self) -> list[PotentialParams]:
        return [PotentialParams(b, g) for b in self.betas for g in self.gammas]


def confusion(truth, predicted, classes) -> ConfusionCounts:
    truth, predicted = np.asarray(truth), np.asarray(predicted)
    if truth.shape != predicted.shape:
        raise ValueError(f"length mismatch: {truth.size} truths, {predicted.size} predictions")
    if truth.size == 0:
        raise ValueError("cannot build a confusion matrix from empty inputs")
    classes = tuple(classes)
    for name, arr in (("truth", truth), ("prediction", predicted)):
        unknown = set(np.unique(arr).tolist()) - set(classes)
        if unknown:
            raise ValueError(f"unknown {name} label(s) {sorted(unknown)}")
    cls = np.asarray(classes)[:, None]
    is_t, is_p = truth[None, :] == cls, predicted[None, :] == cls
    tp = np.sum(is_t & is_p, axis=1)
    fp = np.sum(~is_t & is_p, axis=1)
    fn = np.sum(is_t & ~is_p, axis=1)
    tn = np.sum(~is_t & ~is_p, axis=1)
    return ConfusionCounts(classes, tp, tn, fp, fn)


def _ratio(num, den) -> np.ndarray:
    num, den = np.asarray(num, dtype=float), np.asarray(den, dtype=float)
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


def macro_metrics(c: ConfusionCounts) -> tuple[float, float, float]:
    """Unweighted class means; a class with a zero denominator contributes 0."""
    fdr = _ratio(c.fp, c.tp + c.fp)
    fnr = _ratio(c.fn, c.tp + c.fn)
    f1 = _ratio(c.fp + c.fn, 2 * c.tp + c.fp + c.fn)
    return float(fdr.mean()), float(fnr.mean()), float(f1.mean())


def micro_metrics(c: ConfusionCounts) -> tuple[float, float, float]:
    """Pooled counts, written as complements so single-label results equal 1 - accuracy bit for bit."""
    tp, fp, fn = int(c.tp.sum()), int(c.fp.sum()), int(c.fn.sum())
    fdr = 1.0 - tp / (tp + fp) if tp + fp else 0.0
    fnr = 1.0 - tp / (tp + fn) if tp + fn else 0.0
    f1 = 1.0 - 2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn else 0.0
    return fdr, fnr, f1


def cohen_kappa(truth, predicted) -> float:
    truth, predicted = np.asarray(truth), np.asarray(predicted)
    if truth.shape != predicted.shape or truth.size == 0:
        raise ValueError("kappa needs two non-empty label sequences of equal length")
    labels, inv = np.unique(np.concatenate([truth, predicted]), return_inverse=True)
    t, p = inv[: truth.size], inv[truth.size:]
    n = truth.size
    p_o = np.count_nonzero(t == p) / n
    p_e = float(np.bincount(t, minlength=labels.size) @ np.bincount(p, minlength=labels.size)) / (n * n)
    if p_e == 1.0:
        return 1.0
    return (p_o - p_e) / (1.0 - p_e)


def metric_set(truth, predicted, classes) -> MetricSet:
    c = confusion(truth, predicted, classes)
    return MetricSet(*macro_metrics(c), *micro_metrics(c), cohen_kappa(truth, predicted))


def stratified_folds(y, k: int, seed: int) -> list[np.ndarray]:
    """Test-index sets of a stratified k-fold split.

    Each class is shuffled and dealt round-robin, continuing where the
    previous class stopped, so fold sizes differ by at most one.
    """
    y = np.asarray(y)
    if k < 2:
        raise ValueError("need at least 2 folds")
    rng = np.random.default_rng(seed)
    assign = np.empty(y.size, dtype=np.int64)
    offset = 0
    for c in np.unique(y):
        idx = rng.permutation(np.flatnonzero(y == c))
        assign[idx] = (offset + np.arange(idx.size)) % k
        offset = (offset + idx.size) % k
    return [np.flatnonzero(assign == f) for f in range(k)]


def effective_folds(y, k: int) -> int:
    """Fold count lowered to the smallest class size (never below 2)."""
    counts = np.bincount(np.asarray(y))
    smallest = int(counts[counts > 0].min())
    if smallest < k:
        log.warning("smallest class has %d instance(s); lowering folds from %d to %d", smallest, k, max(2, smallest))
        return max(2, smallest)
    return k


def derive_seed(*parts: int) -> int:
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1)[0])


@dataclass
class InnerFold:
    valid_X: np.ndarray
    valid_y: np.ndarray
    model: OvoModel | None = None
    error: str | None = field(default=None)


def inner_folds(
    data: LabeledDataset, trainer: TrainerConfig, bag_spec: BagSpec, k: int, seed: int,
    fit_geometry: bool = True,
) -> list[InnerFold]:
    """Split, then train one OvO model per inner fold with fold-specific bag seeds.

    Members and geometry do not depend on the tuned parameters, so every grid
    cell reuses these models.
    """
    k = effective_folds(data.y, k)
    out = []
    for f, test_idx in enumerate(stratified_folds(data.y, k, seed)):
        mask = np.ones(len(data), dtype=bool)
        mask[test_idx] = False
        fold = InnerFold(data.X[test_idx], data.y[test_idx])
        spec = replace(bag_spec, seed=derive_seed(bag_spec.seed, f))
        try:
            train_part = data.subset(np.flatnonzero(mask))
            if np.unique(train_part.y).size != data.n_classes:
                raise ValueError("training part lacks a class")
            fold.model = ovo_train(train_part, trainer, spec, fit_geometry=fit_geometry)
        except (ValueError, RuntimeError) as exc:
            fold.error = str(exc)
            log.warning("inner fold %d skipped: %s", f, exc)
        out.append(fold)
    return out


def kappa_table(folds: list[InnerFold], combiner: str, candidates: list) -> dict:
    """Mean validation kappa per candidate parameter, over folds that trained."""
    usable = [f for f in folds if f.model is not None]
    if not usable:
        raise RuntimeError("every inner fold failed to train; cannot tune")
    table = {}
    for cand in candidates:
        kw = {"potential_params": cand} if combiner == "PC" else {"zeta": cand}
        scores = [
            cohen_kappa(f.valid_y, ovo_predict(f.model.configured(combiner, **kw), f.valid_X))
            for f in usable
        ]
        table[cand] = float(np.mean(scores))
    return table


def best_cell(table: dict, order: list):
    """First strict maximum in ``order``; earlier entries win ties."""
    best, best_val = None, -np.inf
    for cand in order:
        if table[cand] > best_val:
            best, best_val = cand, table[cand]
    return best


def grid_search(
    data: LabeledDataset, trainer: TrainerConfig, bag_spec: BagSpec, grid: GridSpec = GridSpec(),
    seed: int = 0,
) -> PotentialParams:
    """(beta, gamma) maximising inner cross-validated kappa; ties go to smaller beta, then smaller gamma."""
    folds = inner_folds(data, trainer, bag_spec, grid.inner_folds, seed)
    cells = grid.cells()
    return best_cell(kappa_table(folds, "PC", cells), cells)


def tune_zeta(
    data: LabeledDataset, trainer: TrainerConfig, bag_spec: BagSpec, grid: GridSpec = GridSpec(),
    seed: int = 0,
) -> ZetaParam:
    """Zeta for the PF combiner, searched over the gamma axis of ``grid``."""
    folds = inner_folds(data, trainer, bag_spec, grid.inner_folds, seed, fit_geometry=False)
    cands = [ZetaParam(z) for z in grid.gammas]
    return best_cell(kappa_table(folds, "PF", cands), cands)
