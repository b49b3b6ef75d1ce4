"""
带回溯线搜索的近端梯度下降 (逻辑回归与多项逻辑回归共用)

目标为 F(θ) + Σ_j c_j·|θ_j|, F 光滑; c_j = 0 的坐标不受 ℓ1 约束。
每次迭代都从初始步长 1.0 开始, 不满足充分下降条件就减半。
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

logger = logging.getLogger(__name__)

INITIAL_STEP = 1.0
MAX_HALVINGS = 80
_ROUNDING = 4.0 * np.finfo(float).eps


@dataclass
class DescentResult:
    """优化结果"""

    theta: np.ndarray
    n_iter: int
    converged: bool
    stationarity: float
    trace: List[float] = field(default_factory=list)


def soft_threshold(z, threshold):
    """软阈值算子 S(z, t) = sign(z)·max(|z| − t, 0)"""
    return np.sign(z) * np.maximum(np.abs(z) - threshold, 0.0)


def stationarity(theta: np.ndarray, grad: np.ndarray, l1: np.ndarray) -> float:
    """最小范数次梯度的无穷范数; l1 全为零时即梯度无穷范数"""
    nonzero = theta != 0
    resid = np.where(
        nonzero,
        grad + l1 * np.sign(theta),
        np.sign(grad) * np.maximum(np.abs(grad) - l1, 0.0),
    )
    return float(np.max(np.abs(resid))) if resid.size else 0.0


def proximal_gradient(
    objective: Callable[[np.ndarray], float],
    gradient: Callable[[np.ndarray], np.ndarray],
    theta0: np.ndarray,
    l1: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 10_000,
) -> DescentResult:
    """最小化 F(θ) + Σ l1·|θ|"""
    theta = np.array(theta0, dtype=np.float64)
    l1 = np.broadcast_to(np.asarray(l1, dtype=np.float64), theta.shape)

    def total(t: np.ndarray, smooth: float) -> float:
        return smooth + float(np.sum(l1 * np.abs(t)))

    smooth = objective(theta)
    trace = [total(theta, smooth)]
    for it in range(max_iter):
        grad = gradient(theta)
        measure = stationarity(theta, grad, l1)
        if measure <= tol:
            logger.debug("近端梯度收敛: 迭代 %d, 平稳度 %.3e", it, measure)
            return DescentResult(theta, it, True, measure, trace)

        step = INITIAL_STEP
        for _ in range(MAX_HALVINGS):
            candidate = soft_threshold(theta - step * grad, step * l1)
            delta = candidate - theta
            cand_smooth = objective(candidate)
            bound = smooth + float(np.sum(grad * delta)) + float(np.sum(delta * delta)) / (2.0 * step)
            if cand_smooth <= bound + _ROUNDING * abs(smooth):
                break
            step *= 0.5
        else:
            logger.warning("线搜索失败, 停在迭代 %d, 平稳度 %.3e", it, measure)
            return DescentResult(theta, it, False, measure, trace)

        theta, smooth = candidate, cand_smooth
        trace.append(total(theta, smooth))

    grad = gradient(theta)
    measure = stationarity(theta, grad, l1)
    return DescentResult(theta, max_iter, measure <= tol, measure, trace)
