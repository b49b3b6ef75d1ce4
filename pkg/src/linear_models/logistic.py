"""
二分类逻辑回归

最小化 Σ log(1 + exp(−ỹ_i f(x_i))) + λα‖w‖₁ + λ(1−α)‖w‖², ỹ ∈ {−1, +1}, 截距不惩罚。
求解器为带回溯线搜索的 (近端) 梯度下降, 见 optim.py。
"""
import logging
import math
from typing import Union

import numpy as np

from src.core.data import Labels, as_labels, as_matrix
from src.core.errors import ConvergenceError, DimensionError, InvalidHyperparameterError
from src.linear_models.base import LogisticModel, Penalty, add_intercept_column, penalty_mix, sigmoid
from src.linear_models.optim import proximal_gradient

logger = logging.getLogger(__name__)

GRAD_TOL = 1e-6
MAX_ITER = 10_000


def logistic_loss(y, f):
    """以 2 为底的逻辑损失 log₂(1 + exp(−y·f)), y·f = 0 时为 1"""
    return np.logaddexp(0.0, -np.asarray(y, dtype=np.float64) * np.asarray(f, dtype=np.float64)) / math.log(2.0)


def _split(theta: np.ndarray):
    return theta[0], theta[1:]


def _smooth_objective(theta, Xa, signs, l2) -> float:
    w = theta[1:]
    return float(np.sum(np.logaddexp(0.0, -signs * (Xa @ theta)))) + l2 * float(w @ w)


def _smooth_gradient(theta, Xa, signs, l2) -> np.ndarray:
    margin = signs * (Xa @ theta)
    grad = Xa.T @ (-signs * sigmoid(-margin))
    grad[1:] += 2.0 * l2 * theta[1:]
    return grad


def logistic_objective(theta, X, signs, lam: float = 0.0, alpha: float = 0.0) -> float:
    """完整目标函数; theta = [w0, w1..wp]"""
    theta = np.asarray(theta, dtype=np.float64)
    Xa = add_intercept_column(as_matrix(X, allow_empty_columns=True))
    signs = np.asarray(signs, dtype=np.float64)
    smooth = _smooth_objective(theta, Xa, signs, lam * (1.0 - alpha))
    return smooth + lam * alpha * float(np.sum(np.abs(theta[1:])))


def logistic_gradient(theta, X, signs, lam: float = 0.0, alpha: float = 0.0) -> np.ndarray:
    """目标函数梯度; ℓ1 部分在 w_j = 0 处取次梯度 0"""
    theta = np.asarray(theta, dtype=np.float64)
    Xa = add_intercept_column(as_matrix(X, allow_empty_columns=True))
    signs = np.asarray(signs, dtype=np.float64)
    grad = _smooth_gradient(theta, Xa, signs, lam * (1.0 - alpha))
    grad[1:] += lam * alpha * np.sign(theta[1:])
    return grad


def fit_logistic(
    X,
    labels: Union[Labels, np.ndarray],
    penalty: Penalty = Penalty.NONE,
    lam: float = 0.0,
    alpha: float = 0.5,
    tol: float = GRAD_TOL,
    max_iter: int = MAX_ITER,
) -> LogisticModel:
    """拟合二分类逻辑回归, labels 索引 1 为 +1 类"""
    penalty = Penalty(penalty)
    if lam < 0:
        raise InvalidHyperparameterError(f"λ 必须 ≥ 0, 实际 {lam}")
    if penalty == Penalty.ELASTIC_NET and not 0.0 <= alpha <= 1.0:
        raise InvalidHyperparameterError(f"α 必须在 [0, 1] 内, 实际 {alpha}")
    X = as_matrix(X, allow_empty_columns=True)
    labels = as_labels(labels)
    if len(labels) != X.shape[0]:
        raise DimensionError(f"标签数 {len(labels)} 与样本数 {X.shape[0]} 不一致")
    signs = labels.signs()
    labels.require_all_classes(1)

    lam = float(lam) if penalty != Penalty.NONE else 0.0
    mix = penalty_mix(penalty, alpha)
    l1_weight = lam * mix
    l2_weight = lam * (1.0 - mix)

    # 列中心化是等价重参数化: 截距吸收均值, 惩罚项不变
    mu = X.mean(axis=0)
    Xa = add_intercept_column(X - mu)
    l1 = np.full(Xa.shape[1], l1_weight)
    l1[0] = 0.0

    result = proximal_gradient(
        lambda t: _smooth_objective(t, Xa, signs, l2_weight),
        lambda t: _smooth_gradient(t, Xa, signs, l2_weight),
        np.zeros(Xa.shape[1]),
        l1,
        tol=tol,
        max_iter=max_iter,
    )
    b, w = _split(result.theta)
    model = LogisticModel(
        intercept=float(b - w @ mu),
        coef=w.copy(),
        classes=labels.names,
        penalty=penalty,
        lam=lam,
        alpha=mix,
        n_iter=result.n_iter,
        objective_trace=tuple(result.trace),
    )
    if not result.converged:
        raise ConvergenceError(
            f"逻辑回归未收敛: 迭代 {result.n_iter} 次, 梯度范数 {result.stationarity:.3e}",
            last_iterate=model,
        )
    logger.info("逻辑回归收敛: 迭代 %d 次, 目标值 %.6g", result.n_iter, result.trace[-1])
    return model
