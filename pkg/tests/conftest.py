from pathlib import Path

import numpy as np
import pytest

from lincomb.core import LabeledDataset, binary_dataset

DATA_DIR = Path(__file__).parent / "data"
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def iris_path():
    return DATA_DIR / "iris.csv"


def two_blobs(n=100, gap=4.0, d=2, seed=0) -> LabeledDataset:
    """Two unit-variance blobs centred at -gap/2 and +gap/2 on the first axis."""
    r = np.random.default_rng(seed)
    half = n // 2
    X = r.normal(size=(n, d))
    X[:half, 0] -= gap / 2
    X[half:, 0] += gap / 2
    labels = np.r_[-np.ones(half), np.ones(n - half)]
    return binary_dataset(X, labels)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
