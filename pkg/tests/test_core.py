import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lincomb.core import (
    DegenerateInputError,
    DimensionError,
    LabeledDataset,
    LinearModel,
    classify,
    discriminant,
    dot,
    norm,
    project_onto_normal,
)

finite = st.floats(-50, 50, allow_nan=False)
vec2 = arrays(np.float64, 2, elements=finite)


def test_dot_examples(rng):
    assert dot((1, 0), (0, 1)) == 0
    assert dot((1, 2), (3, 4)) == 11
    x = rng.normal(size=7)
    assert dot(x, x) == pytest.approx(norm(x) ** 2, rel=1e-12)


def test_dot_dimension_mismatch():
    with pytest.raises(DimensionError):
        dot((1, 2), (1, 2, 3))


def test_norm_examples(rng):
    assert norm((3, 4)) == 5
    assert norm(np.zeros(4)) == 0
    m = LinearModel(rng.normal(size=5) * 30, 2.0)
    assert abs(norm(m.normal) - 1) < 1e-9


def test_model_normalises_offset_jointly():
    m = LinearModel([3.0, 4.0], 10.0)
    np.testing.assert_allclose(m.normal, [0.6, 0.8])
    assert m.offset == pytest.approx(2.0)


def test_zero_normal_rejected():
    with pytest.raises(DegenerateInputError):
        LinearModel([0.0, 0.0], 1.0)


@pytest.mark.parametrize(
    "normal, offset, x, expected",
    [((1, 0), 0, (2, 5), 2.0), ((1, 0), -1, (0, 0), -1.0), ((1, 1), 0, (1, -1), 0.0)],
)
def test_discriminant_examples(normal, offset, x, expected):
    assert discriminant(LinearModel(normal, offset), x) == pytest.approx(expected, abs=1e-12)


def test_discriminant_batch_matches_rows(rng):
    m = LinearModel(rng.normal(size=3), 0.3)
    X = rng.normal(size=(10, 3))
    np.testing.assert_allclose(discriminant(m, X), [discriminant(m, x) for x in X])


def test_discriminant_dimension_error():
    with pytest.raises(DimensionError):
        discriminant(LinearModel((1, 0), 0), (1, 2, 3))


def test_classify_sign_convention():
    m = LinearModel((1, 0), 0)
    assert classify(m, (2.3, 0)) == 1
    assert classify(m, (-0.1, 0)) == -1
    assert classify(m, (0, 7)) == 1


def test_projection_examples():
    np.testing.assert_allclose(project_onto_normal((3, 4), (1, 0)), (3, 0))
    np.testing.assert_allclose(project_onto_normal((0, 4), (1, 0)), (0, 0))
    np.testing.assert_allclose(project_onto_normal((2, 2), (1, 1)), (2, 2))
    with pytest.raises(DegenerateInputError):
        project_onto_normal((1, 1), (0, 0))


@settings(max_examples=200, deadline=None)
@given(vec2, vec2, st.floats(0.01, 100))
def test_classify_invariant_to_positive_scaling(normal, x, c):
    if np.linalg.norm(normal) < 1e-3:
        return
    a = LinearModel(normal, 0.7)
    b = LinearModel(normal * c, 0.7 * c)
    if abs(discriminant(a, x)) > 1e-9:
        assert classify(a, x) == classify(b, x)


def test_abs_discriminant_is_distance_to_plane(rng):
    # brute force: minimise |x - p| over points p = p0 + t*u on the plane (2-D)
    for _ in range(20):
        m = LinearModel(rng.normal(size=2), rng.normal())
        x = rng.normal(size=2) * 3
        p0 = -m.offset * m.normal
        u = np.array([-m.normal[1], m.normal[0]])
        t = np.linspace(-20, 20, 400001)
        pts = p0 + np.outer(t, u)
        brute = np.min(np.linalg.norm(pts - x, axis=1))
        assert abs(abs(discriminant(m, x)) - brute) < 1e-6


@settings(max_examples=200, deadline=None)
@given(vec2, vec2)
def test_projection_idempotent(v, n):
    if np.linalg.norm(n) < 1e-3:
        return
    p = project_onto_normal(v, n)
    np.testing.assert_allclose(project_onto_normal(p, n), p, atol=1e-12 * max(1.0, np.abs(p).max()))


@settings(max_examples=200, deadline=None)
@given(vec2, vec2, st.floats(-20, 20))
def test_discriminant_linear_along_normal(n, x, t):
    if np.linalg.norm(n) < 1e-3:
        return
    m = LinearModel(n, 0.5)
    assert discriminant(m, x + t * m.normal) == pytest.approx(discriminant(m, x) + t, abs=1e-9)


def test_dataset_invariants():
    with pytest.raises(ValueError):
        LabeledDataset(np.zeros((3, 2)), [0, 0, 0])
    with pytest.raises(ValueError):
        LabeledDataset(np.zeros((1, 2)), [0])
    with pytest.raises(ValueError):
        LabeledDataset([[np.nan, 1], [0, 1]], [0, 1])
    with pytest.raises(DimensionError):
        LabeledDataset(np.zeros((3, 2)), [0, 1])


def test_imbalance_ratio_matches_reported_values():
    # class sizes 85/21 and 225/81 reproduce the tabulated 2.52 and 1.89
    appendicitis = LabeledDataset(np.arange(106.0)[:, None], [0] * 85 + [1] * 21)
    haberman = LabeledDataset(np.arange(306.0)[:, None], [0] * 225 + [1] * 81)
    assert round(appendicitis.imbalance_ratio(), 2) == 2.52
    assert round(haberman.imbalance_ratio(), 2) == 1.89
