import logging

import numpy as np
import pytest

from lincomb.harness.preprocess import fit_preprocessor


def test_one_dimensional_unit_variance(rng):
    x = rng.normal(size=(200, 1))
    x = (x - x.mean()) / x.std()
    p = fit_preprocessor(x)
    assert p.n_components == 1
    out = p.transform(x)
    assert np.allclose(out, x, atol=1e-10) or np.allclose(out, -x, atol=1e-10)


def test_variance_on_one_axis(rng):
    t = rng.normal(size=300)
    X = np.c_[t, 2 * t]  # covariance has rank one: all variance along (1, 1) after scaling
    p = fit_preprocessor(X, 0.95)
    assert p.n_components == 1
    assert p.explained_ratio[0] == pytest.approx(1.0)


def test_full_variance_keeps_rank(rng):
    base = rng.normal(size=(100, 3))
    X = np.c_[base, base[:, 0] + base[:, 1], base @ [1.0, -2.0, 0.5]]
    assert fit_preprocessor(X, 1.0).n_components == 3
    assert fit_preprocessor(rng.normal(size=(50, 4)), 1.0).n_components == 4


def test_output_standardised(rng):
    X = rng.normal(size=(120, 5)) @ rng.normal(size=(5, 5)) + 7
    Z = fit_preprocessor(X, 0.95).transform(X)
    np.testing.assert_allclose(Z.mean(axis=0), 0, atol=1e-10)
    np.testing.assert_allclose(Z.std(axis=0), 1, atol=1e-10)


def test_zero_variance_dropped_with_warning(rng, caplog):
    X = np.c_[rng.normal(size=(40, 2)), np.full(40, 3.0)]
    with caplog.at_level(logging.WARNING):
        p = fit_preprocessor(X, 1.0)
    assert list(p.keep) == [0, 1]
    assert "zero-variance" in caplog.text
    assert p.transform(X).shape == (40, 2)


def test_all_constant_rejected():
    with pytest.raises(ValueError):
        fit_preprocessor(np.ones((5, 2)))
    with pytest.raises(ValueError):
        fit_preprocessor(np.ones((5, 2)), 0.0)


def test_fit_ignores_test_rows(rng):
    X = rng.normal(size=(100, 3)) @ rng.normal(size=(3, 3))
    train, test = np.arange(80), np.arange(80, 100)
    clean = fit_preprocessor(X[train])
    poisoned = X.copy()
    poisoned[90] = 1e6
    again = fit_preprocessor(poisoned[train])
    for a, b in zip(
        (clean.mean, clean.scale, clean.components, clean.component_scale),
        (again.mean, again.scale, again.components, again.component_scale),
    ):
        np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(clean.transform(X[test][:5]), again.transform(poisoned[test][:5]))
