"""
高斯生成式分类器测试
"""
import numpy as np
import pytest

from src.core.data import Labels
from src.core.errors import DegenerateLabelsError, DimensionError, SingularMatrixError
from src.gaussian_models import GaussianClassifier, GaussianKind, fit_gaussian

from tests.conftest import make_blobs

ALL_KINDS = list(GaussianKind)


def one_dimensional(priors=(0.5, 0.5)):
    """N(0,1) 与 N(2,1)"""
    return GaussianClassifier.from_parameters(GaussianKind.LDA, [[0.0], [2.0]], [[1.0]], priors, ("a", "b"))


def isotropic_data(p=3, a=1.5):
    """每类样本为 μ_k ± a·e_j, 合并协方差恰为 (a²/p)·I"""
    means = np.array([[0.0, 0.0, 0.0], [4.0, 1.0, -2.0], [-3.0, 5.0, 1.0]])[:, :p]
    rows, y = [], []
    for k, mu in enumerate(means):
        for j in range(p):
            for sign in (1.0, -1.0):
                rows.append(mu + sign * a * np.eye(p)[j])
                y.append(k)
    return np.array(rows), Labels(y, ("a", "b", "c"))


class TestFitGaussian:
    """参数估计"""

    def test_means_and_priors(self, gen):
        X = gen.normal(size=(100, 2))
        y = np.array([0] * 30 + [1] * 70)
        model = fit_gaussian(X, Labels(y, ("a", "b")), GaussianKind.QDA)
        assert np.allclose(model.means[0], X[:30].mean(axis=0), atol=1e-15)
        assert np.allclose(model.means[1], X[30:].mean(axis=0), atol=1e-15)
        assert np.allclose(model.priors, [0.3, 0.7], atol=1e-15)
        assert abs(model.priors.sum() - 1.0) <= 1e-12

    def test_linear_kinds_have_no_quadratic_term(self):
        X, labels = make_blobs()
        for kind in ALL_KINDS:
            model = fit_gaussian(X, labels, kind)
            linear = kind in (GaussianKind.LDA, GaussianKind.NB_SHARED_VAR)
            assert model.is_linear == linear

    def test_lda_coefficients(self, gen):
        X, labels = make_blobs()
        model = fit_gaussian(X, labels, GaussianKind.LDA)
        inv = np.linalg.inv(model.covariances)
        for k in range(3):
            mu = model.means[k]
            assert np.allclose(model.linear[k], inv @ mu, rtol=1e-9, atol=1e-9)
            expected = -0.5 * mu @ inv @ mu + np.log(model.priors[k])
            assert abs(model.bias[k] - expected) <= 1e-8

    def test_qda_coefficients(self):
        X, labels = make_blobs()
        model = fit_gaussian(X, labels, GaussianKind.QDA)
        for k in range(3):
            S = model.covariances[k]
            inv = np.linalg.inv(S)
            mu = model.means[k]
            assert np.allclose(model.quadratic[k], -0.5 * inv, rtol=1e-9, atol=1e-12)
            expected = -0.5 * mu @ inv @ mu - 0.5 * np.linalg.slogdet(S)[1] + np.log(model.priors[k])
            assert abs(model.bias[k] - expected) <= 1e-8

    def test_per_class_variance(self, gen):
        X = np.vstack([gen.normal(0, 1.0, size=(40, 2)), gen.normal(5, 3.0, size=(40, 2))])
        labels = Labels([0] * 40 + [1] * 40, ("a", "b"))
        model = fit_gaussian(X, labels, GaussianKind.NB_PER_CLASS_VAR)
        expected = np.mean((X[40:] - X[40:].mean(axis=0)) ** 2)
        assert abs(model.covariances[1] - expected) <= 1e-8 * expected

    def test_class_with_one_sample(self):
        X = np.array([[0.0], [1.0], [2.0]])
        with pytest.raises(DegenerateLabelsError):
            fit_gaussian(X, Labels([0, 0, 1], ("a", "b")))

    def test_constant_class_is_singular(self):
        X = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 2.0], [3.0, 1.0]])
        labels = Labels([0, 0, 1, 1], ("a", "b"))
        for kind in (GaussianKind.QDA, GaussianKind.NB_PER_CLASS_VAR):
            with pytest.raises(SingularMatrixError):
                fit_gaussian(X, labels, kind)


class TestLogPosteriorScores:
    """对数后验分数"""

    def test_midpoint_boundary(self):
        model = one_dimensional()
        assert model.predict([[0.9], [1.1]]).tolist() == [0, 1]

    def test_unequal_priors_shift_boundary(self):
        model = one_dimensional((0.9, 0.1))
        boundary = 1 + np.log(9) / 2
        s = model.log_posterior_scores([[boundary]])[0]
        assert abs(s[0] - s[1]) <= 1e-12
        assert model.predict([[boundary - 1e-6], [boundary + 1e-6]]).tolist() == [0, 1]

    def test_identity_covariance_is_nearest_mean(self, gen):
        means = gen.normal(size=(4, 3)) * 3
        model = GaussianClassifier.from_parameters(GaussianKind.LDA, means, np.eye(3), np.full(4, 0.25),
                                                   ("a", "b", "c", "d"))
        Z = gen.normal(size=(200, 3)) * 4
        nearest = np.argmin(((Z[:, None, :] - means[None]) ** 2).sum(axis=2), axis=1)
        assert np.array_equal(model.predict(Z), nearest)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            one_dimensional().log_posterior_scores(np.ones((2, 2)))


class TestPredictProba:
    """后验概率"""

    def test_equal_scores(self):
        proba = one_dimensional().predict_proba([[1.0]])
        assert np.allclose(proba, [[0.5, 0.5]], atol=1e-15)

    def test_saturation(self):
        model = GaussianClassifier.from_parameters(GaussianKind.NB_SHARED_VAR, [[0.0], [200.0]], [1.0],
                                                   [0.5, 0.5], ("a", "b"))
        proba = model.predict_proba([[0.0]])
        assert np.allclose(proba, [[1.0, 0.0]], atol=1e-15)

    def test_rows_sum_to_one(self, gen):
        X, labels = make_blobs()
        for kind in ALL_KINDS:
            proba = fit_gaussian(X, labels, kind).predict_proba(gen.normal(size=(50, 2)) * 8)
            assert np.all(np.abs(proba.sum(axis=1) - 1.0) <= 1e-12)


class TestEquivalences:
    """模型之间的等价关系"""

    def test_lda_equals_shared_variance_nb(self):
        X, labels = isotropic_data()
        lda = fit_gaussian(X, labels, GaussianKind.LDA)
        nb = fit_gaussian(X, labels, GaussianKind.NB_SHARED_VAR)
        assert np.allclose(lda.linear, nb.linear, rtol=0, atol=1e-8)
        assert np.allclose(lda.bias, nb.bias, rtol=0, atol=1e-8)

    def test_qda_equals_lda_on_mirrored_classes(self, gen):
        A = np.array([[1.0, 0.6], [0.0, 0.8]])
        X0 = gen.normal(size=(40, 2)) @ A + np.array([1.0, 0.5])
        X = np.vstack([X0, -X0])
        labels = Labels([0] * 40 + [1] * 40, ("a", "b"))
        qda = fit_gaussian(X, labels, GaussianKind.QDA)
        lda = fit_gaussian(X, labels, GaussianKind.LDA)
        assert np.allclose(qda.covariances[0], qda.covariances[1], atol=1e-14)
        grid = np.array([[a, b] for a in np.linspace(-3, 3, 24) for b in np.linspace(-3, 3, 24)])
        assert np.array_equal(qda.predict(grid), lda.predict(grid))

    def test_translation_invariance(self):
        X, labels = make_blobs()
        t = np.array([100.0, -50.0])
        for kind in ALL_KINDS:
            base = fit_gaussian(X, labels, kind).predict(X)
            moved = fit_gaussian(X + t, labels, kind).predict(X + t)
            assert np.array_equal(base, moved)
