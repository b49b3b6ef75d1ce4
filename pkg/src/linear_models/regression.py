"""
最小二乘、岭回归 (闭式解) 与 lasso / 弹性网 (循环坐标下降)

目标函数: ‖y − w0 − Xw‖² + λα‖w‖₁ + λ(1−α)‖w‖²; 截距从不惩罚。
"""
import logging
from typing import Tuple

import numpy as np

from src.core.data import as_matrix, as_vector
from src.core.errors import ConvergenceError, DimensionError, InvalidHyperparameterError
from src.linalg import solve_spd
from src.linear_models.base import LinearModel, Penalty, add_intercept_column
from src.linear_models.optim import soft_threshold

logger = logging.getLogger(__name__)

CD_TOL = 1e-8
CD_MAX_CYCLES = 10_000


def _prepare(X, y) -> Tuple[np.ndarray, np.ndarray]:
    X = as_matrix(X, allow_empty_columns=True)
    y = as_vector(y)
    if y.shape[0] != X.shape[0]:
        raise DimensionError(f"目标数 {y.shape[0]} 与样本数 {X.shape[0]} 不一致")
    return X, y


def _closed_form(X: np.ndarray, y: np.ndarray, lam: float, fit_intercept: bool) -> Tuple[float, np.ndarray]:
    """解增广正规方程 (XᵀX + λD)w = Xᵀy, D 的截距对角元为 0"""
    Xa = add_intercept_column(X) if fit_intercept else X
    if Xa.shape[1] == 0:
        raise DimensionError("既无特征也无截距, 无法拟合")
    A = Xa.T @ Xa
    if lam > 0:
        ridge = np.full(Xa.shape[1], lam)
        if fit_intercept:
            ridge[0] = 0.0
        A = A + np.diag(ridge)
    w = solve_spd(A, Xa.T @ y)
    if fit_intercept:
        return float(w[0]), w[1:]
    return 0.0, w


def fit_ols(X, y, fit_intercept: bool = True) -> LinearModel:
    """普通最小二乘"""
    X, y = _prepare(X, y)
    intercept, coef = _closed_form(X, y, 0.0, fit_intercept)
    logger.info("OLS 拟合完成: %d×%d", *X.shape)
    return LinearModel(intercept, coef, Penalty.NONE, 0.0, 0.0, fit_intercept)


def fit_ridge(X, y, lam: float, fit_intercept: bool = True) -> LinearModel:
    """岭回归 w = (XᵀX + λI)^{-1}Xᵀy"""
    if lam < 0:
        raise InvalidHyperparameterError(f"λ 必须 ≥ 0, 实际 {lam}")
    X, y = _prepare(X, y)
    intercept, coef = _closed_form(X, y, float(lam), fit_intercept)
    return LinearModel(intercept, coef, Penalty.L2, float(lam), 0.0, fit_intercept)


def fit_elastic_net(X, y, lam: float, alpha: float, fit_intercept: bool = True,
                    tol: float = CD_TOL, max_cycles: int = CD_MAX_CYCLES) -> LinearModel:
    """弹性网: 循环坐标下降, 每个坐标用软阈值精确更新"""
    if lam < 0:
        raise InvalidHyperparameterError(f"λ 必须 ≥ 0, 实际 {lam}")
    if not 0.0 <= alpha <= 1.0:
        raise InvalidHyperparameterError(f"α 必须在 [0, 1] 内, 实际 {alpha}")
    X, y = _prepare(X, y)
    n, p = X.shape
    l1 = lam * alpha
    l2 = lam * (1.0 - alpha)
    penalty = Penalty.L1 if alpha == 1.0 else Penalty.ELASTIC_NET

    col_sq = np.einsum("ij,ij->j", X, X)
    w = np.zeros(p)
    intercept = float(y.mean()) if fit_intercept else 0.0
    resid = y - intercept

    for cycle in range(1, max_cycles + 1):
        max_change = 0.0
        for j in range(p):
            denom = 2.0 * (col_sq[j] + l2)
            old = w[j]
            if denom == 0.0:
                new = 0.0
            else:
                rho = float(X[:, j] @ resid) + col_sq[j] * old
                new = float(soft_threshold(2.0 * rho, l1)) / denom
            if new != old:
                resid -= X[:, j] * (new - old)
                w[j] = new
                max_change = max(max_change, abs(new - old))
        if fit_intercept:
            shift = float(resid.mean())
            intercept += shift
            resid -= shift
            max_change = max(max_change, abs(shift))
        if max_change <= tol:
            logger.debug("坐标下降收敛: %d 轮", cycle)
            return LinearModel(intercept, w, penalty, float(lam), float(alpha), fit_intercept, cycle)

    last = LinearModel(intercept, w.copy(), penalty, float(lam), float(alpha), fit_intercept, max_cycles)
    raise ConvergenceError(f"坐标下降 {max_cycles} 轮未收敛", last_iterate=last)


def fit_lasso(X, y, lam: float, fit_intercept: bool = True) -> LinearModel:
    """lasso 即 α = 1 的弹性网"""
    return fit_elastic_net(X, y, lam, 1.0, fit_intercept)


def lasso_lambda_max(X, y, fit_intercept: bool = True) -> float:
    """使全部系数为零的最小 λ (α = 1)"""
    X, y = _prepare(X, y)
    r = y - y.mean() if fit_intercept else y
    return 2.0 * float(np.max(np.abs(X.T @ r))) if X.shape[1] else 0.0


def kkt_residual(model: LinearModel, X, y) -> float:
    """KKT 条件的最大违反量"""
    X, y = _prepare(X, y)
    grad = 2.0 * X.T @ (y - model.predict(X))
    l1 = model.lam * model.alpha
    l2 = model.lam * (1.0 - model.alpha)
    w = model.coef
    violation = np.where(
        w == 0,
        np.maximum(np.abs(grad) - l1, 0.0),
        np.abs(grad - l1 * np.sign(w) - 2.0 * l2 * w),
    )
    return float(violation.max()) if violation.size else 0.0
