"""Bagged ensembles of linear models, their combination rules, and OvO decomposition."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np
from scipy.special import expit

from .core import LabeledDataset, LinearModel, sign
from .geometry import (
    ClassGeometry,
    PotentialParams,
    ZetaParam,
    fit_geometry_pair,
    log_class_potential,
    pc_discriminant,
    pf_transform,
)
from .linear_classifiers import TrainerConfig, train

COMBINERS = ("SM", "MA", "MV", "PF", "PC")
MAX_REDRAWS = 100


class ConfigurationError(ValueError):
    pass


class BaggingError(RuntimeError):
    pass


@dataclass(frozen=True)
class BagSpec:
    n_members: int = 11
    sample_fraction: float = 0.8
    seed: int = 0
    replace: bool = False

    def __post_init__(self):
        if self.n_members < 1:
            raise ValueError("n_members must be >= 1")
        if not 0.0 < self.sample_fraction <= 1.0:
            raise ValueError("sample_fraction must lie in (0, 1]")

    def bag_size(self, n: int) -> int:
        return max(1, math.ceil(self.sample_fraction * n - 1e-9))


@dataclass(frozen=True)
class Ensemble:
    members: tuple
    combiner: str = "MV"
    geometry: tuple | None = None
    potential_params: PotentialParams | None = None
    zeta: ZetaParam | None = None

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ConfigurationError("an ensemble needs at least one member")
        if self.combiner not in COMBINERS:
            raise ConfigurationError(f"unknown combiner {self.combiner!r}; expected one of {COMBINERS}")
        if self.geometry is not None and len(self.geometry) != len(members):
            raise ConfigurationError("geometry must hold one class pair per member")
        object.__setattr__(self, "members", members)
        if self.geometry is not None:
            object.__setattr__(self, "geometry", tuple(tuple(g) for g in self.geometry))

    def __len__(self) -> int:
        return len(self.members)

    def configured(self, combiner: str, potential_params=None, zeta=None) -> "Ensemble":
        return replace(self, combiner=combiner, potential_params=potential_params, zeta=zeta)


def member_scores(e: Ensemble, x) -> np.ndarray:
    """Raw discriminants, one row per member."""
    x = np.asarray(x, dtype=float)
    W = np.stack([m.normal for m in e.members])
    b = np.array([m.offset for m in e.members])
    if x.ndim == 1:
        return W @ x + b
    return W @ x.T + b[:, None]


def combine_mv(e: Ensemble, x):
    out = np.sum(sign(member_scores(e, x)), axis=0)
    return int(out) if np.ndim(out) == 0 else out


def combine_ma(e: Ensemble, x):
    out = np.mean(member_scores(e, x), axis=0)
    return float(out) if np.ndim(out) == 0 else out


def combine_sm(e: Ensemble, x):
    """Mean member sigmoid, in (0, 1); the class threshold is 0.5."""
    out = np.mean(expit(member_scores(e, x)), axis=0)
    return float(out) if np.ndim(out) == 0 else out


def combine_pf(e: Ensemble, x):
    if e.zeta is None:
        raise ConfigurationError("PF combiner needs a zeta parameter")
    out = np.mean(pf_transform(member_scores(e, x), e.zeta), axis=0)
    return float(out) if np.ndim(out) == 0 else out


def _require_pc_inputs(e: Ensemble) -> None:
    if e.geometry is None:
        raise ConfigurationError("PC combiner needs per-member class geometry")
    if e.potential_params is None:
        raise ConfigurationError("PC combiner needs potential parameters (beta, gamma)")


def combine_pc(e: Ensemble, x):
    _require_pc_inputs(e)
    vals = [pc_discriminant(g, x, m, e.potential_params) for m, g in zip(e.members, e.geometry)]
    out = np.mean(vals, axis=0)
    return float(out) if np.ndim(out) == 0 else out


def pc_decision_score(e: Ensemble, x):
    """``combine_pc`` divided per point by the largest member potential.

    The positive rescaling keeps the sign, and it survives the underflow that
    drives every raw potential to 0 far from both centroids.
    """
    _require_pc_inputs(e)
    x = np.asarray(x, dtype=float)
    logs = []
    for m, geoms in zip(e.members, e.geometry):
        by_label = {g.class_label: g for g in geoms}
        logs.append((log_class_potential(by_label[1], x, m, e.potential_params),
                     log_class_potential(by_label[-1], x, m, e.potential_params)))
    lp = np.array([a for a, _ in logs])
    lm = np.array([b for _, b in logs])
    top = np.maximum(lp.max(axis=0), lm.max(axis=0))
    out = np.mean(np.exp(lp - top) - np.exp(lm - top), axis=0)
    return float(out) if np.ndim(out) == 0 else out


_COMBINE = {"MV": combine_mv, "MA": combine_ma, "SM": combine_sm, "PF": combine_pf, "PC": pc_decision_score}


def decision_function(e: Ensemble, x):
    """Combined score centred so that its sign is the decision.

    For PC this is a positive per-point multiple of ``combine_pc``.
    """
    out = _COMBINE[e.combiner](e, x)
    return out - 0.5 if e.combiner == "SM" else out


def predict(e: Ensemble, x):
    return sign(decision_function(e, x))


def _min_per_class(trainer: TrainerConfig, with_geometry: bool) -> int:
    return 2 if with_geometry or trainer.kind in ("FLDA", "NC") else 1


def draw_bags(y_signed: np.ndarray, spec: BagSpec, min_per_class: int = 1) -> list[np.ndarray]:
    """Sorted index sets, one per member; bags short of a class are redrawn."""
    rng = np.random.default_rng(spec.seed)
    n = y_signed.shape[0]
    size = spec.bag_size(n)
    bags = []
    for k in range(spec.n_members):
        for _ in range(MAX_REDRAWS):
            idx = np.sort(rng.choice(n, size=size, replace=spec.replace))
            labels = y_signed[idx]
            if min(np.sum(labels == 1), np.sum(labels == -1)) >= min_per_class:
                bags.append(idx)
                break
        else:
            raise BaggingError(
                f"member {k}: no bag with >= {min_per_class} instance(s) of each class "
                f"after {MAX_REDRAWS} draws"
            )
    return bags


def bag_train(
    data: LabeledDataset,
    trainer: TrainerConfig,
    spec: BagSpec = BagSpec(),
    combiner: str = "MV",
    potential_params: PotentialParams | None = None,
    zeta: ZetaParam | None = None,
    fit_geometry: bool | None = None,
) -> Ensemble:
    """Train ``spec.n_members`` models on random subsamples of a binary dataset.

    Geometry is fitted on each member's own bag; by default only when the
    combiner is PC.
    """
    if fit_geometry is None:
        fit_geometry = combiner == "PC"
    y = data.signed_labels()
    bags = draw_bags(y, spec, _min_per_class(trainer, fit_geometry))
    members, geometry = [], []
    for idx in bags:
        bag = data.subset(idx)
        model = train(bag, trainer)
        members.append(model)
        if fit_geometry:
            geometry.append(fit_geometry_pair(bag, model))
    return Ensemble(
        tuple(members), combiner, tuple(geometry) if fit_geometry else None, potential_params, zeta
    )


@dataclass(frozen=True)
class OvoModel:
    """One ensemble per unordered class pair ``(i, j)``, ``i < j``; class ``j`` is the +1 side."""

    classes: tuple
    class_pairs: tuple
    pair_ensembles: tuple
    class_names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.class_pairs) != len(self.pair_ensembles):
            raise ConfigurationError("one ensemble per class pair is required")
        c = len(self.classes)
        if len(self.class_pairs) != c * (c - 1) // 2:
            raise ConfigurationError("class pairs do not cover every unordered pair")

    def configured(self, combiner: str, potential_params=None, zeta=None) -> "OvoModel":
        return replace(
            self,
            pair_ensembles=tuple(
                e.configured(combiner, potential_params, zeta) for e in self.pair_ensembles
            ),
        )


def pair_dataset(data: LabeledDataset, i: int, j: int) -> LabeledDataset:
    mask = (data.y == i) | (data.y == j)
    names = data.class_names
    return LabeledDataset(data.X[mask], (data.y[mask] == j).astype(int), (names[i], names[j]), data.name)


def pair_seed(seed: int, i: int, j: int) -> int:
    return int(np.random.SeedSequence([seed, i, j]).generate_state(1)[0])


def ovo_train(
    data: LabeledDataset,
    trainer: TrainerConfig,
    spec: BagSpec = BagSpec(),
    combiner: str = "MV",
    potential_params: PotentialParams | None = None,
    zeta: ZetaParam | None = None,
    fit_geometry: bool | None = None,
) -> OvoModel:
    counts = data.class_counts()
    classes = tuple(range(data.n_classes))
    pairs, ensembles = [], []
    for i, j in combinations(classes, 2):
        if counts[i] == 0 or counts[j] == 0:
            raise ConfigurationError(
                f"class pair ({data.class_names[i]!r}, {data.class_names[j]!r}) has an empty class"
            )
        sub = pair_dataset(data, i, j)
        pair_spec = replace(spec, seed=pair_seed(spec.seed, i, j))
        ensembles.append(
            bag_train(sub, trainer, pair_spec, combiner, potential_params, zeta, fit_geometry)
        )
        pairs.append((i, j))
    return OvoModel(classes, tuple(pairs), tuple(ensembles), data.class_names)


def ovo_votes(m: OvoModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    votes = np.zeros((X.shape[0], len(m.classes)), dtype=np.int64)
    rows = np.arange(X.shape[0])
    for (i, j), e in zip(m.class_pairs, m.pair_ensembles):
        winner = np.where(predict(e, X) > 0, j, i)
        votes[rows, winner] += 1
    return votes


def ovo_predict(m: OvoModel, x):
    """Class index with most pairwise wins; ties go to the lowest index."""
    single = np.ndim(x) == 1
    out = np.argmax(ovo_votes(m, x), axis=1)
    return int(out[0]) if single else out
