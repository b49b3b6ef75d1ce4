"""
线性模型测试
"""
import math

import numpy as np
import pytest

from src.core.data import Labels
from src.core.errors import (
    ConvergenceError,
    DegenerateLabelsError,
    DimensionError,
    InvalidHyperparameterError,
)
from src.linear_models import (
    LinearModel,
    LogisticModel,
    Penalty,
    fit_elastic_net,
    fit_lasso,
    fit_logistic,
    fit_ols,
    fit_ridge,
    kkt_residual,
    lasso_lambda_max,
    logistic_gradient,
    logistic_loss,
    logistic_objective,
    proximal_gradient,
    sigmoid,
    soft_threshold,
)


def _augmented(X):
    return np.hstack([np.ones((X.shape[0], 1)), X])


class TestOrdinaryLeastSquares:
    """最小二乘"""

    def test_line_through_two_points(self):
        model = fit_ols([[0.0], [1.0]], [1.0, 3.0])
        assert model.intercept == pytest.approx(1.0, abs=1e-10)
        assert model.coef[0] == pytest.approx(2.0, abs=1e-10)

    def test_noiseless_recovery(self, gen):
        X = gen.normal(size=(60, 4))
        w_true = np.array([1.5, -2.0, 0.5, 3.0])
        model = fit_ols(X, 0.7 + X @ w_true)
        assert np.allclose(model.coef, w_true, atol=1e-8)
        assert model.intercept == pytest.approx(0.7, abs=1e-8)

    def test_intercept_only(self):
        y = np.array([1.0, 2.0, 6.0])
        model = fit_ols(np.empty((3, 0)), y)
        assert model.intercept == pytest.approx(3.0)
        assert model.coef.shape == (0,)
        assert np.allclose(model.predict(np.empty((2, 0))), 3.0)

    def test_residual_orthogonality(self, gen):
        """50 个随机问题 (最大 200×20) 上残差与增广设计矩阵正交"""
        for _ in range(50):
            p = int(gen.integers(1, 21))
            n = int(gen.integers(p + 10, 201))
            X = gen.normal(size=(n, p))
            y = gen.normal(size=n)
            model = fit_ols(X, y)
            Xa = _augmented(X)
            resid = Xa.T @ (y - model.predict(X))
            scale = np.linalg.norm(Xa) * np.linalg.norm(y)
            assert np.max(np.abs(resid)) <= 1e-8 * scale

    def test_prediction_is_affine(self):
        model = LinearModel(1.0, np.array([2.0, -1.0]))
        assert model.predict([[3.0, 4.0]]).tolist() == [3.0]

    def test_dimension_mismatch(self):
        model = LinearModel(0.0, np.zeros(2))
        with pytest.raises(DimensionError):
            model.predict(np.ones((1, 3)))

    def test_target_length_mismatch(self):
        with pytest.raises(DimensionError):
            fit_ols(np.ones((3, 1)), [1.0, 2.0])


class TestRidge:
    """岭回归"""

    def test_single_sample(self):
        model = fit_ridge([[1.0]], [2.0], 1.0, fit_intercept=False)
        assert model.coef[0] == pytest.approx(1.0)

    def test_zero_lambda_equals_ols(self, gen):
        X = gen.normal(size=(40, 3))
        y = gen.normal(size=40)
        ridge = fit_ridge(X, y, 0.0)
        ols = fit_ols(X, y)
        assert np.allclose(ridge.coef, ols.coef, atol=1e-10)
        assert ridge.intercept == pytest.approx(ols.intercept, abs=1e-10)

    def test_shrinkage_limit(self, gen):
        X = gen.normal(size=(100, 5))
        X = (X - X.mean(axis=0)) / X.std(axis=0)
        y = X @ np.array([1.0, -2.0, 3.0, 0.5, 1.0]) + gen.normal(size=100)
        ridge = fit_ridge(X, y, 1e8)
        ols = fit_ols(X, y)
        assert np.linalg.norm(ridge.coef) <= 1e-4 * np.linalg.norm(ols.coef)

    def test_normal_equation_residual(self, gen):
        """50 个随机问题上正规方程残差 ≤ 1e-8 (相对)"""
        for _ in range(50):
            p = int(gen.integers(1, 21))
            n = int(gen.integers(p + 10, 201))
            lam = float(gen.uniform(0.1, 10.0))
            X = gen.normal(size=(n, p))
            y = gen.normal(size=n)
            model = fit_ridge(X, y, lam)
            Xa = _augmented(X)
            w = np.concatenate([[model.intercept], model.coef])
            penalty = lam * w
            penalty[0] = 0.0
            resid = Xa.T @ (y - Xa @ w) - penalty
            assert np.max(np.abs(resid)) <= 1e-8 * np.linalg.norm(Xa.T @ y)

    def test_intercept_not_penalized(self):
        """常数平移 y 只改变截距"""
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0.0, 1.0, 1.0, 3.0])
        base = fit_ridge(X, y, 5.0)
        shifted = fit_ridge(X, y + 100.0, 5.0)
        assert shifted.coef[0] == pytest.approx(base.coef[0], abs=1e-10)
        assert shifted.intercept == pytest.approx(base.intercept + 100.0, abs=1e-8)

    def test_negative_lambda(self):
        with pytest.raises(InvalidHyperparameterError):
            fit_ridge([[1.0]], [1.0], -1.0)


class TestLassoElasticNet:
    """lasso 与弹性网"""

    def test_soft_threshold(self):
        assert soft_threshold(3.0, 1.0) == 2.0
        assert soft_threshold(-3.0, 1.0) == -2.0
        assert soft_threshold(0.5, 1.0) == 0.0

    def test_single_feature_examples(self):
        assert fit_lasso([[1.0]], [3.0], 2.0, fit_intercept=False).coef[0] == pytest.approx(2.0)
        assert fit_lasso([[1.0]], [3.0], 8.0, fit_intercept=False).coef[0] == 0.0

    def test_alpha_one_equals_lasso(self, gen):
        X = gen.normal(size=(50, 6))
        y = gen.normal(size=50)
        lasso = fit_lasso(X, y, 5.0)
        enet = fit_elastic_net(X, y, 5.0, 1.0)
        assert np.allclose(lasso.coef, enet.coef, atol=1e-8)
        assert lasso.penalty == Penalty.L1

    def test_kkt_certificate(self, gen):
        """50 个随机问题上 KKT 条件最大违反量 ≤ 1e-6"""
        for trial in range(50):
            n = int(gen.integers(30, 201))
            p = int(gen.integers(2, 16))
            X = gen.normal(size=(n, p)) / np.sqrt(n)
            w_true = np.where(gen.uniform(size=p) < 0.5, 0.0, gen.normal(scale=3.0, size=p))
            y = X @ w_true + 0.1 * gen.normal(size=n)
            alpha = (1.0, 0.5, 0.1)[trial % 3]
            lam = float(gen.uniform(0.01, 0.5)) * lasso_lambda_max(X, y)
            model = fit_elastic_net(X, y, lam, alpha)
            assert kkt_residual(model, X, y) <= 1e-6

    def test_zero_lambda_matches_ols(self, gen):
        X = gen.normal(size=(100, 3))
        y = X @ np.array([1.0, 2.0, -1.0]) + gen.normal(size=100)
        assert np.allclose(fit_lasso(X, y, 0.0).coef, fit_ols(X, y).coef, atol=1e-6)

    def test_sparsity_monotone(self, gen):
        Q, _ = np.linalg.qr(gen.normal(size=(60, 10)))
        y = Q @ gen.normal(size=10) * 3.0 + 0.1 * gen.normal(size=60)
        lam_max = lasso_lambda_max(Q, y, fit_intercept=False)
        assert lam_max == pytest.approx(2.0 * np.max(np.abs(Q.T @ y)))
        counts = []
        for factor in (0.01, 0.1, 1.0, 10.0, 100.0):
            model = fit_lasso(Q, y, factor * lam_max, fit_intercept=False)
            counts.append(int(np.count_nonzero(model.coef)))
            if factor >= 1.0:
                assert np.all(model.coef == 0.0)
        assert all(a >= b for a, b in zip(counts, counts[1:]))

    def test_convergence_failure_carries_iterate(self, gen):
        X = gen.normal(size=(30, 4))
        X[:, 1] = X[:, 0] + 0.01 * gen.normal(size=30)
        y = gen.normal(size=30)
        with pytest.raises(ConvergenceError) as info:
            fit_elastic_net(X, y, 0.01, 0.5, max_cycles=1)
        assert isinstance(info.value.last_iterate, LinearModel)

    def test_invalid_alpha(self):
        with pytest.raises(InvalidHyperparameterError):
            fit_elastic_net([[1.0]], [1.0], 1.0, 1.5)


class TestLogisticLoss:
    """逻辑损失"""

    def test_examples(self):
        assert logistic_loss(1, 0.0) == pytest.approx(1.0)
        assert logistic_loss(-1, 0.0) == pytest.approx(1.0)
        assert logistic_loss(1, 50.0) < 1e-20
        assert logistic_loss(1, -1.0) == pytest.approx(math.log1p(math.e) / math.log(2.0))

    def test_vectorized(self):
        values = logistic_loss(np.array([1, -1]), np.array([2.0, 2.0]))
        assert values[0] < 1.0 < values[1]


class TestLogisticModel:
    """逻辑回归预测"""

    def test_zero_model(self):
        model = LogisticModel(0.0, np.zeros(2), ("neg", "pos"))
        X = np.array([[1.0, 2.0], [-3.0, 0.5]])
        assert np.array_equal(model.predict_proba(X), np.full((2, 2), 0.5))
        assert model.predict(X).tolist() == [0, 0]

    def test_extreme_scores(self):
        model = LogisticModel(0.0, np.array([1.0]), ("neg", "pos"))
        proba = model.predict_proba(np.array([[1e6], [-1e6]]))
        assert proba[0, 1] == pytest.approx(1.0, abs=1e-12)
        assert proba[1, 1] == pytest.approx(0.0, abs=1e-12)
        assert np.all(np.isfinite(proba))

    def test_rows_sum_to_one(self, gen):
        model = LogisticModel(0.3, gen.normal(size=3), ("x", "y"))
        proba = model.predict_proba(gen.normal(size=(50, 3)) * 10)
        assert np.all((proba >= 0) & (proba <= 1))
        assert np.allclose(proba.sum(axis=1), 1.0, rtol=0, atol=1e-15)

    def test_sigmoid_symmetry(self):
        f = np.linspace(-30, 30, 61)
        assert np.allclose(sigmoid(f) + sigmoid(-f), 1.0, atol=1e-15)


class TestFitLogistic:
    """逻辑回归训练"""

    def test_symmetric_data(self):
        X = np.array([[-2.0], [-1.0], [1.0], [2.0]])
        labels = Labels([0, 0, 1, 1], ("neg", "pos"))
        model = fit_logistic(X, labels, Penalty.L2, 1.0)
        assert abs(model.intercept) <= 1e-6
        assert model.coef[0] > 0
        assert model.predict(X).tolist() == [0, 0, 1, 1]

    def test_gradient_matches_finite_differences(self, gen):
        """20 个随机问题上解析梯度与中心差分一致"""
        h = 1e-6
        for _ in range(20):
            n = int(gen.integers(10, 60))
            p = int(gen.integers(1, 6))
            X = gen.normal(size=(n, p))
            signs = np.where(gen.uniform(size=n) < 0.5, -1.0, 1.0)
            theta = gen.normal(size=p + 1)
            for lam, alpha in [(0.0, 0.0), (0.7, 0.0), (0.7, 0.5)]:
                grad = logistic_gradient(theta, X, signs, lam, alpha)
                fd = np.empty(p + 1)
                for j in range(p + 1):
                    e = np.zeros(p + 1)
                    e[j] = h
                    fd[j] = (logistic_objective(theta + e, X, signs, lam, alpha)
                             - logistic_objective(theta - e, X, signs, lam, alpha)) / (2 * h)
                assert np.allclose(grad, fd, rtol=1e-5, atol=1e-6)

    def test_objective_trace_non_increasing(self, gen):
        X = gen.normal(size=(80, 3))
        y = (X[:, 0] + gen.normal(size=80) > 0).astype(int)
        model = fit_logistic(X, Labels(y, ("neg", "pos")), Penalty.L2, 0.5)
        trace = np.array(model.objective_trace)
        assert len(trace) > 1
        assert np.all(np.diff(trace) <= 1e-12 * np.abs(trace[:-1]))

    def test_gradient_small_at_solution(self, gen):
        X = gen.normal(size=(60, 2))
        y = (X @ np.array([1.0, -1.0]) + gen.normal(size=60) > 0).astype(int)
        model = fit_logistic(X, Labels(y, ("neg", "pos")), Penalty.L2, 0.1)
        theta = np.concatenate([[model.intercept], model.coef])
        grad = logistic_gradient(theta, X, np.where(y == 1, 1.0, -1.0), 0.1, 0.0)
        assert np.max(np.abs(grad)) <= 1e-5

    def test_l1_kills_coefficients(self, gen):
        X = gen.normal(size=(40, 3))
        y = np.array([1] * 10 + [0] * 30)
        model = fit_logistic(X, Labels(y, ("neg", "pos")), Penalty.L1, 1e3)
        assert np.all(model.coef == 0.0)
        assert model.intercept == pytest.approx(math.log(10 / 30), abs=1e-5)

    def test_elastic_net_penalty_recorded(self, gen):
        X = gen.normal(size=(50, 2))
        y = (X[:, 0] > 0).astype(int)
        model = fit_logistic(X, Labels(y, ("neg", "pos")), Penalty.ELASTIC_NET, 2.0, alpha=0.3)
        assert model.penalty == Penalty.ELASTIC_NET
        assert model.alpha == 0.3

    def test_single_class_rejected(self):
        with pytest.raises(DegenerateLabelsError):
            fit_logistic(np.ones((3, 1)), Labels([1, 1, 1], ("neg", "pos")))

    def test_three_classes_rejected(self):
        with pytest.raises(DegenerateLabelsError):
            fit_logistic(np.ones((3, 1)), Labels([0, 1, 2], ("a", "b", "c")))

    def test_non_convergence(self):
        X = np.array([[-1.0], [1.0]])
        with pytest.raises(ConvergenceError) as info:
            fit_logistic(X, Labels([0, 1], ("neg", "pos")), max_iter=3)
        assert isinstance(info.value.last_iterate, LogisticModel)


class TestProximalGradient:
    """近端梯度下降"""

    def test_each_iteration_starts_from_unit_step(self):
        """F(θ) = 1.5θ² 需要把步长从 1.0 减半两次到 0.25, 每次迭代都应重新从 1.0 开始"""
        evaluated = []

        def objective(theta):
            evaluated.append(float(theta[0]))
            return 1.5 * float(theta[0] ** 2)

        result = proximal_gradient(objective, lambda theta: 3.0 * theta, np.array([1.0]), np.zeros(1))
        assert result.converged
        assert len(evaluated) == 1 + 3 * result.n_iter
        accepted = evaluated[0]
        for it in range(result.n_iter):
            tried = evaluated[1 + 3 * it: 4 + 3 * it]
            assert tried == pytest.approx([-2.0 * accepted, -0.5 * accepted, 0.25 * accepted])
            accepted = tried[-1]
