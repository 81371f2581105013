import numpy as np
import pytest

from csmatrix.constructions import build_additive, build_latin, build_rs_latin
from csmatrix.sparse import SparseBinaryMatrix


@pytest.fixture(scope="session")
def additive5():
    return build_additive(5)


@pytest.fixture(scope="session")
def rs_latin19():
    return build_rs_latin(19)


@pytest.fixture(scope="session")
def latin8():
    return build_latin(8)


def random_binary(rng, m, n, weights=(2, 3)) -> SparseBinaryMatrix:
    cols = [sorted(rng.choice(m, size=rng.integers(weights[0], weights[1] + 1), replace=False)) for _ in range(n)]
    return SparseBinaryMatrix(m, n, cols)


@pytest.fixture
def rng():
    return np.random.default_rng(2015)
