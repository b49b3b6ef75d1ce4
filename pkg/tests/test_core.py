"""
核心数据模型、距离、随机数测试
"""
import numpy as np
import pytest

from src.core.base import HyperParameters
from src.core.data import Labels, as_labels, as_matrix, encode_labels
from src.core.distance import euclidean_distance, squared_distances, row_sq_distances
from src.core.errors import (
    DataError,
    DegenerateLabelsError,
    DimensionError,
    EmptyDatasetError,
    InvalidHyperparameterError,
)
from src.core.parallel import parallel_map
from src.core.rng import SeededRng, rng_split
from pydantic import Field


class TestEuclideanDistance:
    """欧氏距离"""

    def test_examples(self):
        assert euclidean_distance([0, 0], [3, 4]) == 5.0
        assert euclidean_distance([1.5, -2.0], [1.5, -2.0]) == 0.0
        assert euclidean_distance([1], [4]) == 3.0

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            euclidean_distance([1, 2], [1, 2, 3])

    def test_metric_axioms(self, gen):
        """非负、对称、三角不等式"""
        for _ in range(200):
            a, b, c = gen.normal(size=(3, 5)) * gen.uniform(0.1, 100)
            dab = euclidean_distance(a, b)
            assert dab >= 0
            assert dab == euclidean_distance(b, a)
            assert dab + euclidean_distance(b, c) >= euclidean_distance(a, c) - 1e-12

    def test_matrix_and_row_forms_agree_bitwise(self, gen):
        """矩阵形式与单点形式逐位一致"""
        A = gen.normal(size=(30, 4))
        B = gen.normal(size=(5, 4))
        D = squared_distances(A, B)
        for c in range(5):
            assert np.array_equal(D[:, c], row_sq_distances(A, B[c]))


class TestLabels:
    """标签编码"""

    def test_first_appearance_order(self):
        labels = encode_labels(["b", "a", "b"])
        assert labels.values.tolist() == [0, 1, 0]
        assert labels.names == ("b", "a")

    def test_single_class(self):
        labels = encode_labels(["x"])
        assert labels.q == 1
        assert labels.values.tolist() == [0]

    def test_round_trip(self):
        raw = ["setosa", "virginica", "setosa", "versicolor"]
        assert encode_labels(raw).decode() == raw

    def test_empty_rejected(self):
        with pytest.raises(EmptyDatasetError):
            encode_labels([])

    def test_binary_signs(self):
        labels = Labels([0, 1, 1, 0], ("neg", "pos"))
        assert labels.signs().tolist() == [-1.0, 1.0, 1.0, -1.0]
        with pytest.raises(DegenerateLabelsError):
            Labels([0, 1, 2], ("a", "b", "c")).signs()

    def test_as_labels_from_indices(self):
        labels = as_labels(np.array([2, 0, 1]))
        assert labels.q == 3
        assert labels.names == ("0", "1", "2")

    def test_missing_class_detected(self):
        with pytest.raises(DegenerateLabelsError):
            Labels([0, 0], ("a", "b")).require_all_classes()


class TestMatrix:
    """矩阵校验"""

    def test_non_finite_rejected(self):
        with pytest.raises(DataError):
            as_matrix([[1.0, np.nan]])
        with pytest.raises(DataError):
            as_matrix([[np.inf]])

    def test_empty_rejected(self):
        with pytest.raises(EmptyDatasetError):
            as_matrix(np.empty((0, 3)))

    def test_vector_becomes_column(self):
        assert as_matrix([1.0, 2.0]).shape == (2, 1)


class TestSeededRng:
    """可复现随机数"""

    def test_same_seed_same_stream(self):
        a = SeededRng(42).next_u64(1000)
        b = SeededRng(42).next_u64(1000)
        assert np.array_equal(a, b)

    def test_chunking_does_not_matter(self):
        r = SeededRng(5)
        first = np.concatenate([r.next_u64(3), r.next_u64(7)])
        assert np.array_equal(first, SeededRng(5).next_u64(10))

    def test_known_splitmix_value(self):
        """SplitMix64 种子 0 的第一个输出"""
        assert int(SeededRng(0).next_u64(1)[0]) == 0xE220A8397B1DCDAF

    def test_uniform_range(self):
        u = SeededRng(1).random(10000)
        assert u.min() >= 0.0 and u.max() < 1.0
        assert abs(u.mean() - 0.5) < 0.02

    def test_integers_and_permutation(self):
        r = SeededRng(9)
        ints = r.integers(7, size=5000)
        assert ints.min() == 0 and ints.max() == 6
        perm = r.permutation(20)
        assert sorted(perm.tolist()) == list(range(20))

    def test_weighted_index_skips_zero_weights(self):
        r = SeededRng(3)
        weights = np.array([0.0, 1.0, 0.0, 3.0, 0.0])
        picks = [r.weighted_index(weights) for _ in range(2000)]
        assert set(picks) <= {1, 3}
        assert 0.15 < picks.count(1) / 2000 < 0.35


class TestRngSplit:
    """种子派生"""

    def test_pure_function(self):
        assert rng_split(11, 4) == rng_split(11, 4)

    def test_child_depends_only_on_index(self):
        assert rng_split(11, 2) == rng_split(11, 5)[:2]

    def test_single_stream_reproducible(self):
        (child,) = rng_split(99, 1)
        assert np.array_equal(SeededRng(child).next_u64(10), SeededRng(child).next_u64(10))

    def test_two_streams_differ(self):
        s0, s1 = rng_split(2024, 2)
        a = SeededRng(s0).next_u64(1_000_000)
        b = SeededRng(s1).next_u64(1_000_000)
        assert np.all(a != b)


class _DemoParams(HyperParameters):
    k: int = Field(default=1, ge=1)


class TestHyperParameters:
    """超参数校验"""

    def test_validation_error_converted(self):
        with pytest.raises(InvalidHyperparameterError):
            _DemoParams(k=0)
        with pytest.raises(InvalidHyperparameterError):
            _DemoParams(unknown=1)

    def test_frozen(self):
        params = _DemoParams(k=3)
        with pytest.raises(Exception):
            params.k = 4


class TestParallelMap:
    """并行映射保持顺序"""

    def test_order_preserved(self):
        assert parallel_map(lambda v: v * v, range(20), threads=4) == [v * v for v in range(20)]
        assert parallel_map(lambda v: v + 1, [1, 2, 3]) == [2, 3, 4]
