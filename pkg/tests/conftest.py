"""
共享测试夹具
"""
from pathlib import Path

import numpy as np
import pytest

from src.core.data import Labels

FIXTURES = Path(__file__).parent / "fixtures"


def make_blobs(seed: int = 7, n_per_class: int = 50, spacing: float = 10.0):
    """三类高斯团: 均值间隔 spacing, 单位方差"""
    gen = np.random.default_rng(seed)
    means = np.array([[0.0, 0.0], [spacing, 0.0], [spacing / 2, spacing * np.sqrt(3) / 2]])
    X = np.vstack([gen.normal(m, 1.0, size=(n_per_class, 2)) for m in means])
    y = np.repeat(np.arange(3), n_per_class)
    return X, Labels(y, ("a", "b", "c"))


def make_rings(seed: int = 3, n_per_ring: int = 60, radii=(0.5, 3.0), noise: float = 0.05):
    """两个同心圆环, 内环为类别 0"""
    gen = np.random.default_rng(seed)
    parts, labels = [], []
    for k, r in enumerate(radii):
        angle = gen.uniform(0, 2 * np.pi, n_per_ring)
        radius = r + gen.normal(0, noise, n_per_ring)
        parts.append(np.column_stack([radius * np.cos(angle), radius * np.sin(angle)]))
        labels.append(np.full(n_per_ring, k))
    return np.vstack(parts), Labels(np.concatenate(labels), ("inner", "outer"))


@pytest.fixture
def gen():
    return np.random.default_rng(12345)


@pytest.fixture
def blobs():
    return make_blobs()


@pytest.fixture
def rings():
    return make_rings()


@pytest.fixture
def iris_path():
    return FIXTURES / "iris.csv"
