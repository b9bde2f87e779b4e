"""Cross-validated benchmark over datasets x base learners x combiners."""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from ..combiners import COMBINERS, BagSpec, ovo_predict, ovo_train
from ..core import LabeledDataset
from ..evaluation import (
    GridSpec,
    MetricSet,
    best_cell,
    derive_seed,
    effective_folds,
    inner_folds,
    kappa_table,
    metric_set,
    stratified_folds,
)
from ..geometry import ZetaParam
from ..linear_classifiers import KINDS, TrainerConfig
from .data import generate, load_csv
from .preprocess import fit_preprocessor

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    """``datasets`` entries are CSV paths or ``{"generator": kind, ...kwargs}`` mappings."""

    datasets: tuple
    learners: tuple = ("NC",)
    combiners: tuple = COMBINERS
    outer_folds: int = 10
    bag_spec: BagSpec = BagSpec()
    grid: GridSpec = GridSpec()
    pca_variance: float = 0.95
    seed: int = 0
    output: str = "results"

    def __post_init__(self):
        if not self.datasets:
            raise ValueError("config lists no datasets")
        if not self.learners or not self.combiners:
            raise ValueError("config needs at least one learner and one combiner")
        learners = tuple(k.upper() for k in self.learners)
        combiners = tuple(c.upper() for c in self.combiners)
        for k in learners:
            if k not in KINDS:
                raise ValueError(f"unknown learner {k!r}")
        for c in combiners:
            if c not in COMBINERS:
                raise ValueError(f"unknown combiner {c!r}")
        if self.outer_folds < 2:
            raise ValueError("outer_folds must be >= 2")
        if not 0.0 < self.pca_variance <= 1.0:
            raise ValueError("pca_variance must lie in (0, 1]")
        object.__setattr__(self, "datasets", tuple(self.datasets))
        object.__setattr__(self, "learners", learners)
        object.__setattr__(self, "combiners", combiners)

    @classmethod
    def from_mapping(cls, raw: dict, base_dir: Path | None = None) -> "ExperimentConfig":
        raw = dict(raw)
        base_dir = base_dir or Path.cwd()
        datasets = []
        for entry in raw.pop("datasets", []):
            if isinstance(entry, str):
                p = Path(entry)
                datasets.append(str(p if p.is_absolute() else base_dir / p))
            else:
                datasets.append(dict(entry))
        bag = BagSpec(**raw.pop("bag", {}))
        grid = GridSpec(**raw.pop("grid", {}))
        return cls(datasets=tuple(datasets), bag_spec=bag, grid=grid, **raw)

    @classmethod
    def from_yaml(cls, path) -> "ExperimentConfig":
        path = Path(path)
        with path.open() as fh:
            raw = yaml.safe_load(fh) or {}
        return cls.from_mapping(raw, path.parent)


@dataclass
class RunRecord:
    dataset: str
    learner: str
    combiner: str
    fold: int
    metrics: MetricSet
    params: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def as_dict(self, include_timing: bool = False) -> dict:
        out = {
            "dataset": self.dataset,
            "learner": self.learner,
            "combiner": self.combiner,
            "fold": self.fold,
            **self.metrics.as_dict(),
            "params": self.params,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out


def resolve_dataset(entry) -> LabeledDataset:
    if isinstance(entry, dict):
        spec = dict(entry)
        kind = spec.pop("generator")
        name = spec.pop("name", kind)
        data = generate(kind, **spec)
        return LabeledDataset(data.X, data.y, data.class_names, name)
    return load_csv(entry)


def _combiner_kwargs(combiner: str, pc_params, zeta) -> tuple[dict, dict]:
    if combiner == "PC":
        return {"potential_params": pc_params}, {"beta": pc_params.beta, "gamma": pc_params.gamma}
    if combiner == "PF":
        return {"zeta": zeta}, {"zeta": zeta.zeta}
    return {}, {}


def run_cell(
    data: LabeledDataset, train_idx, test_idx, learner: str, fold: int, ds_index: int,
    learner_index: int, cfg: ExperimentConfig,
) -> list[RunRecord]:
    """One outer fold for one learner: every combiner shares the same bagged members."""
    t0 = time.perf_counter()
    prep = fit_preprocessor(data.X[train_idx], cfg.pca_variance)
    train = data.subset(train_idx).with_features(prep.transform(data.X[train_idx]))
    X_test, y_test = prep.transform(data.X[test_idx]), data.y[test_idx]

    cell_seed = derive_seed(cfg.seed, ds_index, learner_index, fold)
    trainer = TrainerConfig(learner, seed=derive_seed(cell_seed, 1))
    bag = replace(cfg.bag_spec, seed=derive_seed(cell_seed, 2))
    needs_geometry = "PC" in cfg.combiners
    model = ovo_train(train, trainer, bag, fit_geometry=needs_geometry)

    pc_params = zeta = None
    if "PC" in cfg.combiners or "PF" in cfg.combiners:
        folds = inner_folds(
            train, trainer, bag, cfg.grid.inner_folds, derive_seed(cell_seed, 3), needs_geometry
        )
        if "PC" in cfg.combiners:
            cells = cfg.grid.cells()
            pc_params = best_cell(kappa_table(folds, "PC", cells), cells)
        if "PF" in cfg.combiners:
            cands = [ZetaParam(z) for z in cfg.grid.gammas]
            zeta = best_cell(kappa_table(folds, "PF", cands), cands)
    shared = time.perf_counter() - t0

    classes = range(data.n_classes)
    records = []
    for combiner in cfg.combiners:
        t1 = time.perf_counter()
        kwargs, params = _combiner_kwargs(combiner, pc_params, zeta)
        pred = ovo_predict(model.configured(combiner, **kwargs), X_test)
        metrics = metric_set(y_test, pred, classes)
        records.append(
            RunRecord(data.name, learner, combiner, fold, metrics, params,
                      shared + time.perf_counter() - t1)
        )
    return records


def _run_job(args):
    return run_cell(*args)


def cross_validate(cfg: ExperimentConfig, jobs: int = 1) -> list[RunRecord]:
    """Stratified outer CV; each (dataset, learner, fold) job owns a seed derived from its id."""
    tasks = []
    seen = set()
    for ds_index, entry in enumerate(cfg.datasets):
        data = resolve_dataset(entry)
        if data.name in seen:
            raise ValueError(f"duplicate dataset name {data.name!r}; give each dataset a unique name")
        seen.add(data.name)
        k = effective_folds(data.y, cfg.outer_folds)
        test_sets = stratified_folds(data.y, k, derive_seed(cfg.seed, ds_index))
        for fold, test_idx in enumerate(test_sets):
            train_idx = np.setdiff1d(np.arange(len(data)), test_idx)
            for li, learner in enumerate(cfg.learners):
                tasks.append((data, train_idx, test_idx, learner, fold, ds_index, li, cfg))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_job, tasks))
    else:
        chunks = [_run_job(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    order = {name: i for i, name in enumerate(cfg.combiners)}
    lorder = {name: i for i, name in enumerate(cfg.learners)}
    names = []
    for r in records:
        if r.dataset not in names:
            names.append(r.dataset)
    records.sort(key=lambda r: (names.index(r.dataset), lorder[r.learner], order[r.combiner], r.fold))
    return records
