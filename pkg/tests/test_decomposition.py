"""
降维测试: 主成分分析与线性判别分析投影
"""
import numpy as np
import pytest
from scipy.linalg import subspace_angles

from src.core.data import Labels
from src.core.errors import (
    DegenerateLabelsError,
    DimensionError,
    InsufficientSamplesError,
    InvalidHyperparameterError,
    SingularMatrixError,
)
from src.decomposition import (
    lda_fit_transform,
    lda_transform,
    pca_fit,
    pca_inverse_transform,
    pca_transform,
    reconstruction_error,
    scatter_matrices,
)

from tests.conftest import make_blobs


def load_iris_features(path):
    return np.genfromtxt(path, delimiter=",", skip_header=1, usecols=range(4))


class TestPca:
    """主成分分析"""

    def test_points_on_diagonal(self):
        t = np.linspace(-2, 3, 9)
        model = pca_fit(np.column_stack([t, t]), 1)
        assert np.allclose(model.components[:, 0], [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-10)
        assert model.explained_variance_ratio[0] == pytest.approx(1.0, abs=1e-10)

    def test_iris_first_component(self, iris_path):
        model = pca_fit(load_iris_features(iris_path), 2)
        assert abs(model.explained_variance_ratio[0] - 0.9246) <= 5e-4

    def test_orthonormal_components(self, gen):
        X = gen.normal(size=(50, 5)) @ gen.normal(size=(5, 5))
        W = pca_fit(X, 3).components
        assert np.allclose(W.T @ W, np.eye(3), atol=1e-8)

    def test_ratios(self, gen):
        X = gen.normal(size=(50, 4)) * np.array([3.0, 2.0, 1.0, 0.5])
        model = pca_fit(X, 4)
        ratios = model.explained_variance_ratio
        assert np.all(np.diff(ratios) <= 0)
        assert np.all((ratios >= 0) & (ratios <= 1))
        assert ratios.sum() == pytest.approx(1.0, abs=1e-10)

    def test_total_variance_conserved(self, gen):
        X = gen.normal(size=(40, 3))
        Xc = X - X.mean(axis=0)
        model = pca_fit(X, 3)
        assert model.eigenvalues.sum() == pytest.approx(np.trace(Xc.T @ Xc), rel=1e-8)
        assert model.total_variance == pytest.approx(np.trace(Xc.T @ Xc), rel=1e-8)

    def test_round_trip_full_rank(self, gen):
        X = gen.normal(size=(30, 4))
        model = pca_fit(X, 4)
        assert np.allclose(pca_inverse_transform(model, pca_transform(model, X)), X, atol=1e-8)
        assert reconstruction_error(model, X) <= 1e-12

    def test_mean_row_maps_to_zero(self, gen):
        X = gen.normal(size=(30, 3))
        model = pca_fit(X, 2)
        assert np.allclose(model.transform(X.mean(axis=0, keepdims=True)), 0.0, atol=1e-12)

    def test_projected_variances(self, gen):
        X = gen.normal(size=(60, 3)) @ np.array([[2.0, 0.3, 0.0], [0.0, 1.0, 0.5], [0.0, 0.0, 0.4]])
        model = pca_fit(X, 3)
        T = model.transform(X)
        assert np.allclose(T.var(axis=0), model.explained_variance, atol=1e-8)
        G = T.T @ T
        off = G - np.diag(np.diag(G))
        assert np.abs(off).max() <= 1e-6 * np.abs(G).max()

    def test_truncated_reconstruction_error(self, gen):
        X = gen.normal(size=(40, 3))
        model = pca_fit(X, 2)
        full = pca_fit(X, 3)
        assert reconstruction_error(model, X) == pytest.approx(full.eigenvalues[2] / 40, rel=1e-8)

    def test_invalid_arguments(self, gen):
        X = gen.normal(size=(10, 3))
        for l in (0, 4):
            with pytest.raises(InvalidHyperparameterError):
                pca_fit(X, l)
        with pytest.raises(InsufficientSamplesError):
            pca_fit(X[:1], 1)
        with pytest.raises(DimensionError):
            pca_fit(X, 2).transform(np.ones((2, 2)))


class TestLdaProjection:
    """线性判别分析投影"""

    def test_separates_1d_classes(self):
        X = np.array([[0.0], [0.1], [5.0], [5.1]])
        labels = Labels([0, 0, 1, 1], ("a", "b"))
        _, Z = lda_fit_transform(X, labels, 1)
        z = Z[:, 0]
        spread = max(abs(z[1] - z[0]), abs(z[3] - z[2]))
        gap = abs(z[2:].mean() - z[:2].mean())
        assert gap > 10 * spread

    def test_single_class_between_scatter(self, gen):
        X = gen.normal(size=(20, 3))
        within, between = scatter_matrices(X, Labels(np.zeros(20, dtype=int), ("a",)))
        assert np.array_equal(between, np.zeros((3, 3)))
        Xc = X - X.mean(axis=0)
        assert np.allclose(within, Xc.T @ Xc)

    def test_top_eigenvalue_matches_grid(self):
        X, labels = make_blobs(spacing=3.0)
        model, _ = lda_fit_transform(X, labels, 2)
        within, between = scatter_matrices(X, labels)
        angles = np.linspace(0, np.pi, 20001)
        W = np.stack([np.cos(angles), np.sin(angles)])
        ratio = np.einsum("in,ij,jn->n", W, between, W) / np.einsum("in,ij,jn->n", W, within, W)
        assert model.eigenvalues[0] == pytest.approx(ratio.max(), rel=1e-2)
        assert model.eigenvalues[0] >= model.eigenvalues[1]

    def test_whitened_components(self):
        X, labels = make_blobs(spacing=3.0)
        model, _ = lda_fit_transform(X, labels, 2)
        within, _ = scatter_matrices(X, labels)
        W = model.components
        assert np.allclose(W.T @ within @ W, np.eye(2), atol=1e-6)

    def test_invariant_under_change_of_units(self, gen):
        X = np.vstack([gen.normal(0, 1, size=(40, 3)), gen.normal(1.5, 1, size=(40, 3))])
        labels = Labels([0] * 40 + [1] * 40, ("a", "b"))
        A = np.array([[2.0, 0.5, 0.0], [0.0, 0.3, 0.1], [0.4, 0.0, 5.0]])
        b = np.array([10.0, -3.0, 0.5])
        base, _ = lda_fit_transform(X, labels, 1)
        moved, _ = lda_fit_transform(X @ A + b, labels, 1)
        assert moved.eigenvalues[0] == pytest.approx(base.eigenvalues[0], rel=1e-8)
        assert subspace_angles(base.components, A @ moved.components).max() <= 1e-6

    def test_mixed_scale_units_not_perturbed(self, gen):
        """各列量纲相差很大时, 正定的 S_w 不应被加扰动"""
        X = np.vstack([gen.normal(0, 1, size=(40, 3)), gen.normal(1.5, 1, size=(40, 3))])
        labels = Labels([0] * 40 + [1] * 40, ("a", "b"))
        A = np.diag([1e-2, 1.0, 1e2])
        base, _ = lda_fit_transform(X, labels, 1)
        moved, _ = lda_fit_transform(X @ A, labels, 1)
        assert moved.eigenvalues[0] == pytest.approx(base.eigenvalues[0], rel=1e-6)
        within, _ = scatter_matrices(X @ A, labels)
        w = moved.components[:, 0]
        assert float(w @ within @ w) == pytest.approx(1.0, rel=1e-8)

    def test_transform_matches_training_projection(self, gen):
        X, labels = make_blobs()
        model, Z = lda_fit_transform(X, labels, 2)
        assert np.allclose(lda_transform(model, X), Z)

    def test_invalid_dimension(self):
        X, labels = make_blobs()
        for l in (0, 3):
            with pytest.raises(InvalidHyperparameterError):
                lda_fit_transform(X, labels, l)

    def test_single_class_rejected(self, gen):
        with pytest.raises(DegenerateLabelsError):
            lda_fit_transform(gen.normal(size=(5, 2)), Labels(np.zeros(5, dtype=int), ("a",)), 1)

    def test_singular_within_scatter(self):
        X = np.array([[0.0, 1.0], [0.0, 1.0], [3.0, 2.0], [3.0, 2.0]])
        with pytest.raises(SingularMatrixError):
            lda_fit_transform(X, Labels([0, 0, 1, 1], ("a", "b")), 1)
