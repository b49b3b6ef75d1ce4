"""
支持向量机训练: 表示定理参数化下的确定性次梯度下降

目标函数 J(α) = Σ_i loss(y_i, [Kα]_i) + (1/2C)·αᵀKα。
在再生核空间中对 f = Kα 取次梯度, 折回 α 坐标后方向为 α/C − s,
s_i 为损失对 f_i 的负次梯度; 步长 C/√t, 于是

    α ← (1 − 1/√t)·α + (C/√t)·s

每步用精确的 J 评估并保留最优迭代, 截距固定为 0。
"""
import logging
from typing import Callable, Tuple, Union

import numpy as np

from src.core.base import Task
from src.core.data import Labels, as_labels, as_matrix, as_vector
from src.core.errors import DegenerateLabelsError, DimensionError, InvalidHyperparameterError
from src.kernel_methods import KernelSpec, gram
from src.svm.model import SvmModel, support_indices

logger = logging.getLogger(__name__)

DEFAULT_ITERATIONS = 5000


def hinge_loss(y, f):
    """max(0, 1 − y·f)"""
    return np.maximum(0.0, 1.0 - np.asarray(y, dtype=np.float64) * np.asarray(f, dtype=np.float64))


def eps_insensitive_loss(y, f, epsilon: float):
    """max(0, |y − f| − ε)"""
    if epsilon < 0:
        raise InvalidHyperparameterError(f"ε 必须 ≥ 0, 实际 {epsilon}")
    diff = np.abs(np.asarray(y, dtype=np.float64) - np.asarray(f, dtype=np.float64))
    return np.maximum(0.0, diff - epsilon)


def svm_objective(alphas, K, y, C: float, task: Task = Task.CLASSIFY, epsilon: float = 0.0) -> float:
    """J(α); 分类时 y 为 ±1"""
    alphas = np.asarray(alphas, dtype=np.float64)
    f = K @ alphas
    if task == Task.CLASSIFY:
        loss = hinge_loss(y, f)
    else:
        loss = eps_insensitive_loss(y, f, epsilon)
    return float(np.sum(loss)) + float(alphas @ f) / (2.0 * C)


def _binary_signs(labels) -> Tuple[np.ndarray, Labels]:
    """Labels 或 ±1 数组 → (±1 向量, 二分类 Labels)"""
    if not isinstance(labels, Labels):
        raw = np.asarray(labels)
        if raw.dtype.kind in "iuf" and raw.size and np.all(np.isin(raw, (-1, 1))):
            labels = Labels((raw > 0).astype(np.int64), ("-1", "+1"))
        else:
            labels = as_labels(raw)
    if labels.q != 2:
        raise DegenerateLabelsError(f"支持向量分类需要二分类标签, 实际类别数 {labels.q}")
    labels.require_all_classes(1)
    return labels.signs(), labels


def _subgradient(
    K: np.ndarray,
    descent: Callable[[np.ndarray], np.ndarray],
    objective: Callable[[np.ndarray], float],
    C: float,
    iterations: int,
) -> Tuple[np.ndarray, float, list]:
    alphas = np.zeros(K.shape[0])
    best, best_value = alphas.copy(), objective(alphas)
    trace = [best_value]
    for t in range(1, iterations + 1):
        root = np.sqrt(t)
        alphas = (1.0 - 1.0 / root) * alphas + (C / root) * descent(K @ alphas)
        value = objective(alphas)
        if value < best_value:
            best, best_value = alphas.copy(), value
        trace.append(best_value)
    return best, best_value, trace


def _check(C: float, iterations: int) -> None:
    if C <= 0:
        raise InvalidHyperparameterError(f"C 必须 > 0, 实际 {C}")
    if iterations < 1:
        raise InvalidHyperparameterError(f"迭代次数必须 ≥ 1, 实际 {iterations}")


def _build(task, X, kernel, C, epsilon, alphas, classes, iterations, value, trace) -> SvmModel:
    support = support_indices(alphas)
    return SvmModel(
        task=task,
        kernel=kernel,
        C=float(C),
        epsilon=float(epsilon),
        alphas=alphas,
        support=support,
        support_vectors=X[support],
        intercept=0.0,
        classes=classes,
        iterations=iterations,
        objective=value,
        objective_trace=tuple(trace),
    )


def fit_svc(X, labels: Union[Labels, np.ndarray], kernel: KernelSpec, C: float = 1.0,
            iterations: int = DEFAULT_ITERATIONS) -> SvmModel:
    """铰链损失的核支持向量分类"""
    _check(C, iterations)
    X = as_matrix(X)
    y, labels = _binary_signs(labels)
    if y.shape[0] != X.shape[0]:
        raise DimensionError(f"标签数 {y.shape[0]} 与样本数 {X.shape[0]} 不一致")
    K = gram(kernel, X)

    alphas, value, trace = _subgradient(
        K,
        lambda f: np.where(y * f < 1.0, y, 0.0),
        lambda a: svm_objective(a, K, y, C),
        C,
        iterations,
    )
    model = _build(Task.CLASSIFY, X, kernel, C, 0.0, alphas, labels.names, iterations, value, trace)
    logger.info("SVC: %d 个样本, 支持向量 %d 个, 目标值 %.6g", X.shape[0], model.support.size, value)
    return model


def fit_svr(X, y, kernel: KernelSpec, C: float = 1.0, epsilon: float = 0.1,
            iterations: int = DEFAULT_ITERATIONS) -> SvmModel:
    """ε 不敏感损失的核支持向量回归"""
    _check(C, iterations)
    if epsilon < 0:
        raise InvalidHyperparameterError(f"ε 必须 ≥ 0, 实际 {epsilon}")
    X = as_matrix(X)
    y = as_vector(y)
    if y.shape[0] != X.shape[0]:
        raise DimensionError(f"目标数 {y.shape[0]} 与样本数 {X.shape[0]} 不一致")
    K = gram(kernel, X)

    def descent(f: np.ndarray) -> np.ndarray:
        resid = y - f
        return np.where(np.abs(resid) > epsilon, np.sign(resid), 0.0)

    alphas, value, trace = _subgradient(
        K,
        descent,
        lambda a: svm_objective(a, K, y, C, Task.REGRESS, epsilon),
        C,
        iterations,
    )
    model = _build(Task.REGRESS, X, kernel, C, epsilon, alphas, (), iterations, value, trace)
    logger.info("SVR: %d 个样本, 支持向量 %d 个, 目标值 %.6g", X.shape[0], model.support.size, value)
    return model
