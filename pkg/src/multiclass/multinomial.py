"""
多项逻辑回归 (softmax 回归)

每个类别一条超平面 w_k (含截距), 目标为交叉熵加 λΣ_k‖w_k‖², 截距不惩罚。
q 组权重不加可辨识约束, 由 ℓ2 惩罚消除平移自由度。
"""
import logging
from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np
from scipy.special import logsumexp
from scipy.special import softmax as _softmax

from src.core.base import Classifier, persistable
from src.core.data import Labels, as_labels, as_matrix, check_n_features
from src.core.errors import ConvergenceError, DegenerateLabelsError, DimensionError, InvalidHyperparameterError
from src.linear_models.base import add_intercept_column
from src.linear_models.optim import proximal_gradient

logger = logging.getLogger(__name__)


def softmax(scores) -> np.ndarray:
    """沿最后一维的 softmax (先减去最大值再取指数)"""
    return _softmax(np.asarray(scores, dtype=np.float64), axis=-1)


@persistable("multinomial")
@dataclass(frozen=True)
class MultinomialModel(Classifier):
    """weights 为 q×(p+1), 第 0 列为截距"""

    weights: np.ndarray
    classes: Tuple[str, ...]
    lam: float = 0.0
    n_iter: int = 0
    objective_trace: Tuple[float, ...] = field(default=(), compare=False, metadata={"persist": False})

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[1] - 1)

    def scores(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_n_features(X, self.n_features)
        return add_intercept_column(X) @ self.weights.T

    def predict_proba(self, X) -> np.ndarray:
        return softmax(self.scores(X))

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.scores(X), axis=1).astype(np.int64)


def _one_hot(labels: Labels) -> np.ndarray:
    Y = np.zeros((len(labels), labels.q))
    Y[np.arange(len(labels)), labels.values] = 1.0
    return Y


def _objective(W: np.ndarray, Xa: np.ndarray, Y: np.ndarray, lam: float) -> float:
    S = Xa @ W.T
    data = float(np.sum(logsumexp(S, axis=1) - np.sum(S * Y, axis=1)))
    return data + lam * float(np.sum(W[:, 1:] ** 2))


def _gradient(W: np.ndarray, Xa: np.ndarray, Y: np.ndarray, lam: float) -> np.ndarray:
    P = softmax(Xa @ W.T)
    G = (P - Y).T @ Xa
    G[:, 1:] += 2.0 * lam * W[:, 1:]
    return G


def cross_entropy_objective(weights, X, labels: Labels, lam: float = 0.0) -> float:
    """Σ_i −log softmax(s_i)[y_i] + λΣ_k‖w_k‖²"""
    Xa = add_intercept_column(as_matrix(X))
    return _objective(np.asarray(weights, dtype=np.float64), Xa, _one_hot(labels), lam)


def cross_entropy_gradient(weights, X, labels: Labels, lam: float = 0.0) -> np.ndarray:
    Xa = add_intercept_column(as_matrix(X))
    return _gradient(np.asarray(weights, dtype=np.float64), Xa, _one_hot(labels), lam)


def fit_multinomial(X, labels: Union[Labels, np.ndarray], lam: float = 0.0,
                    tol: float = 1e-6, max_iter: int = 10_000) -> MultinomialModel:
    """带回溯线搜索的梯度下降, 停止条件与 fit_logistic 相同"""
    if lam < 0:
        raise InvalidHyperparameterError(f"λ 必须 ≥ 0, 实际 {lam}")
    X = as_matrix(X)
    labels = as_labels(labels)
    if len(labels) != X.shape[0]:
        raise DimensionError(f"标签数 {len(labels)} 与样本数 {X.shape[0]} 不一致")
    if labels.q < 2:
        raise DegenerateLabelsError(f"多项逻辑回归至少需要 2 个类别, 实际 {labels.q}")
    labels.require_all_classes(1)

    q, p = labels.q, X.shape[1]
    mu = X.mean(axis=0)
    Xa = add_intercept_column(X - mu)
    Y = _one_hot(labels)
    shape = (q, p + 1)

    result = proximal_gradient(
        lambda t: _objective(t.reshape(shape), Xa, Y, lam),
        lambda t: _gradient(t.reshape(shape), Xa, Y, lam).ravel(),
        np.zeros(q * (p + 1)),
        0.0,
        tol=tol,
        max_iter=max_iter,
    )
    W = result.theta.reshape(shape).copy()
    W[:, 0] -= W[:, 1:] @ mu
    model = MultinomialModel(W, labels.names, float(lam), result.n_iter, tuple(result.trace))
    if not result.converged:
        raise ConvergenceError(
            f"多项逻辑回归未收敛: 迭代 {result.n_iter} 次, 梯度范数 {result.stationarity:.3e}",
            last_iterate=model,
        )
    logger.info("多项逻辑回归收敛: %d 类, 迭代 %d 次", q, result.n_iter)
    return model
