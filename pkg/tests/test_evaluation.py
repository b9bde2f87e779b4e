import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lincomb.combiners import BagSpec
from lincomb.core import LabeledDataset
from lincomb.evaluation import (
    GridSpec,
    cohen_kappa,
    confusion,
    effective_folds,
    grid_search,
    inner_folds,
    kappa_table,
    macro_metrics,
    metric_set,
    micro_metrics,
    stratified_folds,
    tune_zeta,
)
from lincomb.geometry import PotentialParams
from lincomb.linear_classifiers import TrainerConfig

labels = st.lists(st.integers(0, 3), min_size=1, max_size=60)


def test_confusion_perfect():
    truth = [0, 1, 1, 2, 2, 2, 0, 1, 2, 2]
    c = confusion(truth, truth, (0, 1, 2))
    np.testing.assert_array_equal(c.tp, [2, 3, 5])
    assert not c.fp.any() and not c.fn.any()


def test_confusion_binary_hand_count():
    c = confusion([1, 1, -1, -1], [1, -1, -1, 1], (-1, 1))
    assert (c.tp[1], c.fn[1], c.fp[1], c.tn[1]) == (1, 1, 1, 1)


def test_confusion_errors():
    with pytest.raises(ValueError):
        confusion([], [], (0, 1))
    with pytest.raises(ValueError):
        confusion([0, 1], [0], (0, 1))
    with pytest.raises(ValueError):
        confusion([0, 5], [0, 1], (0, 1))


def test_macro_examples():
    perfect = confusion([0, 1, 2], [0, 1, 2], (0, 1, 2))
    assert macro_metrics(perfect) == (0.0, 0.0, 0.0)
    c = confusion([1, 1, -1, -1], [1, -1, -1, 1], (-1, 1))
    assert macro_metrics(c)[0] == pytest.approx(0.5)
    # class 2 present but never predicted: FNR term 1, FDR term 0 (empty denominator)
    c = confusion([0, 1, 2], [0, 1, 1], (0, 1, 2))
    fdr, fnr, f1 = macro_metrics(c)
    assert fnr == pytest.approx(1 / 3)
    assert fdr == pytest.approx(0.5 / 3)
    assert f1 == pytest.approx((0 + 1 / 3 + 1) / 3)


def test_micro_examples():
    c = confusion([1, 1, -1, -1], [1, -1, -1, 1], (-1, 1))
    assert micro_metrics(c) == (0.5, 0.5, 0.5)
    assert micro_metrics(confusion([0, 2], [0, 2], (0, 1, 2))) == (0.0, 0.0, 0.0)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_micro_equals_error_rate(data):
    truth = data.draw(labels)
    pred = data.draw(st.lists(st.integers(0, 3), min_size=len(truth), max_size=len(truth)))
    c = confusion(truth, pred, range(4))
    fdr, fnr, f1 = micro_metrics(c)
    err = 1.0 - np.mean(np.asarray(truth) == np.asarray(pred))
    assert fdr == fnr == f1 == err
    assert int(c.fp.sum()) == int(c.fn.sum())
    for i in range(4):
        assert c.tp[i] + c.tn[i] + c.fp[i] + c.fn[i] == len(truth)
    assert all(0 <= v <= 1 for v in macro_metrics(c) + (fdr, fnr, f1))


def test_macro_equals_micro_for_identical_quadruples():
    # two classes, each with one TP and one FN mirrored: identical quadruples
    c = confusion([0, 0, 1, 1], [0, 1, 1, 0], (0, 1))
    np.testing.assert_allclose(macro_metrics(c), micro_metrics(c), atol=1e-12)


def test_kappa_examples():
    assert cohen_kappa([0, 1, 2, 1], [0, 1, 2, 1]) == 1.0
    assert cohen_kappa([0, 1, 1, 0, 1], [1, 1, 1, 1, 1]) == 0.0
    assert cohen_kappa([1, 1, -1, -1], [1, -1, -1, 1]) == 0.0
    assert cohen_kappa([3, 3], [3, 3]) == 1.0
    with pytest.raises(ValueError):
        cohen_kappa([], [])


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_kappa_symmetric_and_bounded(data):
    truth = data.draw(labels)
    pred = data.draw(st.lists(st.integers(0, 3), min_size=len(truth), max_size=len(truth)))
    k = cohen_kappa(truth, pred)
    assert k == pytest.approx(cohen_kappa(pred, truth), abs=1e-15)
    assert -1 <= k <= 1


def test_metric_set_perfect():
    m = metric_set([0, 1, 2, 2], [0, 1, 2, 2], (0, 1, 2))
    assert m.as_dict() == {k: (1.0 if k == "kappa" else 0.0) for k in m.as_dict()}


def test_stratified_folds_partition():
    y = np.repeat([0, 1, 2], 50)
    folds = stratified_folds(y, 10, seed=3)
    assert [f.size for f in folds] == [15] * 10
    assert np.array_equal(np.sort(np.concatenate(folds)), np.arange(150))
    for f in folds:
        np.testing.assert_array_equal(np.bincount(y[f]), [5, 5, 5])
    again = stratified_folds(y, 10, seed=3)
    assert all(np.array_equal(a, b) for a, b in zip(folds, again))


def test_effective_folds_lowered():
    assert effective_folds(np.r_[np.zeros(20, int), np.ones(4, int)], 10) == 4
    assert effective_folds(np.r_[np.zeros(20, int), np.ones(40, int)], 10) == 10


def test_grid_spec_defaults():
    g = GridSpec()
    assert g.betas == tuple(i / 10 for i in range(11))
    assert g.gammas == (0.25, 0.5, 1.0, 2.0, 4.0)
    assert len(g.cells()) == 55


def small_problem(seed, n=60, d=2, classes=2, spread=None):
    r = np.random.default_rng(seed)
    spread = spread or [1.0] * classes
    X = np.vstack([r.normal(size=(n // classes, d)) * s + 2.5 * c for c, s in enumerate(spread)])
    return LabeledDataset(X, np.repeat(np.arange(classes), n // classes))


def test_grid_with_single_cell():
    data = small_problem(0)
    g = GridSpec(betas=(0.3,), gammas=(2.0,))
    assert grid_search(data, TrainerConfig("NC"), BagSpec(3, 0.8, 1), g) == PotentialParams(0.3, 2.0)


def test_grid_result_in_grid_and_matches_table():
    data = small_problem(1, classes=3, n=90)
    grid = GridSpec()
    spec = BagSpec(3, 0.8, 2)
    best = grid_search(data, TrainerConfig("NC"), spec, grid, seed=5)
    assert best.beta in grid.betas and best.gamma in grid.gammas
    table = kappa_table(inner_folds(data, TrainerConfig("NC"), spec, 3, 5), "PC", grid.cells())
    top = max(table.values())
    winners = sorted((p.beta, p.gamma) for p, v in table.items() if v == top)
    assert (best.beta, best.gamma) == winners[0]


def test_grid_argmax_on_unequal_spreads():
    data = small_problem(3, n=300, d=2, spread=[0.4, 2.5])
    spec = BagSpec(5, 0.8, 0)
    table = kappa_table(inner_folds(data, TrainerConfig("NC"), spec, 3, 1), "PC", GridSpec().cells())
    best = grid_search(data, TrainerConfig("NC"), spec, GridSpec(), seed=1)
    # independent oracle: loop gammas outermost, keep the lexicographically smallest maximiser
    top, arg = -np.inf, None
    for g in GridSpec().gammas:
        for b in GridSpec().betas:
            v = table[PotentialParams(b, g)]
            if v > top or (v == top and (b, g) < arg):
                top, arg = v, (b, g)
    assert (best.beta, best.gamma) == arg


def test_tune_zeta_in_grid():
    data = small_problem(4)
    z = tune_zeta(data, TrainerConfig("NC"), BagSpec(3, 0.8, 0), GridSpec())
    assert z.zeta in GridSpec().gammas
