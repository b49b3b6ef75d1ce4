"""
核函数、核岭回归与核主成分分析测试
"""
import numpy as np
import pytest

from src.config.settings import settings
from src.core.errors import DimensionError, InvalidHyperparameterError
from src.kernel_methods import (
    KernelKind,
    KernelSpec,
    center_gram,
    fit_kernel_ridge,
    gram,
    kernel_eval,
    kernel_pca_fit,
    kernel_pca_transform,
)
from src.linalg import sym_eig
from src.linear_models import Penalty, fit_logistic, fit_ridge

LINEAR = KernelSpec(kind=KernelKind.LINEAR)
RBF = KernelSpec(kind=KernelKind.RBF, gamma=1.0)


class TestKernels:
    """核函数"""

    def test_rbf_self_similarity(self):
        assert kernel_eval(RBF, [1.0, -2.0, 3.0], [1.0, -2.0, 3.0]) == 1.0

    def test_polynomial(self):
        spec = KernelSpec(kind=KernelKind.POLYNOMIAL, gamma=1.0, c0=0.0, degree=2)
        assert kernel_eval(spec, [1.0, 1.0], [1.0, 1.0]) == 4.0

    def test_sigmoid(self):
        spec = KernelSpec(kind=KernelKind.SIGMOID, gamma=0.5, c0=1.0)
        assert kernel_eval(spec, [1.0, 2.0], [2.0, 0.0]) == pytest.approx(np.tanh(2.0))

    def test_linear_gram(self, gen):
        A = gen.normal(size=(7, 3))
        B = gen.normal(size=(4, 3))
        assert np.allclose(gram(LINEAR, A, B), A @ B.T, atol=1e-12)

    @pytest.mark.parametrize("kind", list(KernelKind))
    def test_gram_symmetric(self, gen, kind):
        A = gen.normal(size=(15, 2))
        K = gram(KernelSpec(kind=kind, gamma=0.3, c0=1.0, degree=2), A)
        assert np.max(np.abs(K - K.T)) <= 1e-12

    def test_invalid_parameters(self):
        with pytest.raises(InvalidHyperparameterError):
            KernelSpec(kind=KernelKind.RBF, gamma=0.0)
        with pytest.raises(InvalidHyperparameterError):
            KernelSpec(kind=KernelKind.POLYNOMIAL, degree=0)
        with pytest.raises(InvalidHyperparameterError):
            KernelSpec(kind=KernelKind.SIGMOID, c0=-1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            gram(RBF, np.ones((2, 3)), np.ones((2, 2)))
        with pytest.raises(DimensionError):
            kernel_eval(RBF, [1.0], [1.0, 2.0])

    @pytest.mark.parametrize("spec", [
        KernelSpec(kind=KernelKind.LINEAR),
        KernelSpec(kind=KernelKind.POLYNOMIAL, gamma=0.5, c0=1.0, degree=3),
        KernelSpec(kind=KernelKind.RBF, gamma=0.7),
    ])
    def test_gram_is_psd(self, gen, spec):
        K = gram(spec, gen.normal(size=(25, 4)))
        smallest = sym_eig(K).eigenvalues[-1]
        assert smallest >= -1e-8 * np.max(np.abs(K))

    def test_centered_row_sums(self, gen):
        Kc = center_gram(gram(RBF, gen.normal(size=(30, 3))))
        assert np.max(np.abs(Kc.sum(axis=1))) <= 1e-8

    def test_parallel_blocks_match(self, gen, monkeypatch):
        """多线程分块计算与整体计算逐位一致"""
        A = gen.normal(size=(600, 3))
        B = gen.normal(size=(20, 3))
        monkeypatch.setattr(settings, "threads", 3)
        parallel = gram(RBF, A, B)
        monkeypatch.setattr(settings, "threads", None)
        assert np.array_equal(parallel, gram(RBF, A, B))


class TestKernelRidge:
    """核岭回归"""

    def test_identity_gram(self):
        y = np.array([2.0, -4.0, 6.0])
        model = fit_kernel_ridge(np.eye(3), y, LINEAR, 1.0)
        assert np.allclose(model.alpha, y / 2)

    def test_linear_kernel_matches_ridge(self, gen):
        X = gen.normal(size=(30, 4))
        y = gen.normal(size=30)
        Z = gen.normal(size=(10, 4))
        krr = fit_kernel_ridge(X, y, LINEAR, 0.5)
        ridge = fit_ridge(X, y, 0.5, fit_intercept=False)
        assert np.allclose(krr.predict(Z), ridge.predict(Z), atol=1e-6)

    def test_huge_lambda(self, gen):
        X = gen.normal(size=(30, 2))
        y = gen.normal(size=30)
        model = fit_kernel_ridge(X, y, RBF, 1e8)
        assert np.max(np.abs(model.predict(X))) <= 1e-6 * np.max(np.abs(y))

    def test_interpolation_limit(self):
        X = np.arange(8, dtype=float).reshape(-1, 1)
        y = np.sin(X[:, 0])
        model = fit_kernel_ridge(X, y, RBF, 1e-10)
        assert np.max(np.abs(y - model.predict(X))) <= 1e-4 * np.max(np.abs(y))

    def test_lambda_must_be_positive(self):
        with pytest.raises(InvalidHyperparameterError):
            fit_kernel_ridge(np.eye(2), [1.0, 2.0], RBF, 0.0)


class TestKernelPca:
    """核主成分分析"""

    def test_linear_kernel_matches_pca(self, gen):
        X = gen.normal(size=(20, 3)) * np.array([3.0, 1.5, 0.5])
        mu = X.mean(axis=0)
        Xc = X - mu
        values, vectors = np.linalg.eigh(Xc.T @ Xc)
        V = vectors[:, ::-1][:, :2]
        reference = Xc @ V

        model = kernel_pca_fit(X, LINEAR, 2)
        scores = model.transform(X)
        assert np.allclose(model.eigenvalues, values[::-1][:2], rtol=1e-8)

        Z = gen.normal(size=(5, 3))
        projected = kernel_pca_transform(model, Z)
        for k in range(2):
            sign = np.sign(scores[:, k] @ reference[:, k])
            assert np.allclose(scores[:, k], sign * reference[:, k], atol=1e-6)
            assert np.allclose(projected[:, k], sign * (Z - mu) @ V[:, k], atol=1e-6)

    def test_duplicated_rows(self, gen):
        A = gen.normal(size=(10, 2))
        X = np.vstack([A, A])
        T = kernel_pca_fit(X, RBF, 3).transform(X)
        assert np.allclose(T[:10], T[10:], atol=1e-12)

    def test_rank_reduction_warning(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        model = kernel_pca_fit(X, LINEAR, 3)
        assert model.n_components == 1
        assert model.warning is not None
        assert "降为 1" in model.warning

    def test_invalid_components(self):
        with pytest.raises(InvalidHyperparameterError):
            kernel_pca_fit(np.eye(3), RBF, 4)

    def test_rings_become_separable(self, rings):
        X, labels = rings
        T = kernel_pca_fit(X, RBF, 2).transform(X)
        T = (T - T.mean(axis=0)) / T.std(axis=0)
        model = fit_logistic(T, labels, Penalty.L2, 1.0)
        assert np.array_equal(model.predict(T), labels.values)
