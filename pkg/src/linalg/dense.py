"""
稠密线性代数: 对称正定求解、对称特征分解、列中心化、协方差

Cholesky 分解失败时在对角线上加 jitter_scale·trace/p 重试一次,
仍失败则抛 SingularMatrixError。
"""
import logging
from dataclasses import dataclass
from typing import Literal, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from src.core.errors import (
    DimensionError,
    InsufficientSamplesError,
    InvalidHyperparameterError,
    SingularMatrixError,
    SymmetryError,
)

logger = logging.getLogger(__name__)

SYMMETRY_RTOL = 1e-10
CHOLESKY_JITTER = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

CholeskyFactor = Tuple[np.ndarray, bool]


@dataclass(frozen=True)
class EigenResult:
    """特征分解结果: 特征值降序, 第 i 列特征向量对应第 i 个特征值"""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(A, name: str = "A") -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"{name} 必须是方阵, 实际形状 {A.shape}")
    return A


def check_symmetric(A: np.ndarray, rtol: float = SYMMETRY_RTOL) -> None:
    """对称性检查 (相对最大元素)"""
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    if A.size and float(np.max(np.abs(A - A.T))) > rtol * max(scale, np.finfo(float).tiny):
        raise SymmetryError("矩阵不对称")


def cholesky_factor(A, jitter_scale: float = CHOLESKY_JITTER) -> CholeskyFactor:
    """Cholesky 分解 (下三角), 失败时加对角 jitter 重试一次"""
    A = _as_square(A)
    check_symmetric(A)
    try:
        return cho_factor(A, lower=True, check_finite=False)
    except LinAlgError:
        pass

    p = A.shape[0]
    jitter = jitter_scale * float(np.trace(A)) / p
    if not jitter > 0:
        raise SingularMatrixError("矩阵非正定, 且迹非正无法加 jitter")
    logger.warning("Cholesky 分解失败, 对角线加 %.3e 后重试", jitter)
    try:
        return cho_factor(A + jitter * np.eye(p), lower=True, check_finite=False)
    except LinAlgError:
        raise SingularMatrixError(f"加 jitter {jitter:.3e} 后矩阵仍非正定") from None


def cholesky_logdet(factor: CholeskyFactor) -> float:
    """由 Cholesky 因子计算 log|A|"""
    return 2.0 * float(np.sum(np.log(np.diag(factor[0]))))


def solve_spd(A, B) -> np.ndarray:
    """求解 A·X = B, A 对称正定"""
    A = _as_square(A)
    B = np.asarray(B, dtype=np.float64)
    if B.shape[0] != A.shape[0]:
        raise DimensionError(f"右端行数 {B.shape[0]} 与矩阵阶数 {A.shape[0]} 不一致")
    return cho_solve(cholesky_factor(A), B, check_finite=False)


def spd_inverse(A) -> np.ndarray:
    A = _as_square(A)
    inv = solve_spd(A, np.eye(A.shape[0]))
    return 0.5 * (inv + inv.T)


def sym_eig(A) -> EigenResult:
    """循环 Jacobi 旋转求对称矩阵全部特征对"""
    A = _as_square(A)
    check_symmetric(A)
    a = 0.5 * (A + A.T)
    p = a.shape[0]
    V = np.eye(p)
    scale = float(np.max(np.abs(a))) if p else 0.0
    tol = JACOBI_TOL * scale

    converged = p <= 1 or scale == 0.0
    sweeps = 0
    while not converged and sweeps < JACOBI_MAX_SWEEPS:
        off = np.abs(a - np.diag(np.diag(a)))
        if float(off.max()) <= tol:
            converged = True
            break
        sweeps += 1
        for i in range(p - 1):
            for j in range(i + 1, p):
                apq = a[i, j]
                if abs(apq) <= tol:
                    continue
                theta = (a[j, j] - a[i, i]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_i = a[:, i].copy()
                col_j = a[:, j].copy()
                a[:, i] = c * col_i - s * col_j
                a[:, j] = s * col_i + c * col_j
                row_i = a[i, :].copy()
                row_j = a[j, :].copy()
                a[i, :] = c * row_i - s * row_j
                a[j, :] = s * row_i + c * row_j
                a[i, j] = 0.0
                a[j, i] = 0.0

                v_i = V[:, i].copy()
                v_j = V[:, j].copy()
                V[:, i] = c * v_i - s * v_j
                V[:, j] = s * v_i + c * v_j

    if not converged:
        off = np.abs(a - np.diag(np.diag(a)))
        if float(off.max()) > tol:
            logger.warning("Jacobi 迭代达到 %d 轮上限, 最大非对角元 %.3e", JACOBI_MAX_SWEEPS, float(off.max()))
    logger.debug("Jacobi 完成: 阶数 %d, 轮数 %d", p, sweeps)

    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    V = V[:, order]
    return EigenResult(eigenvalues, fix_signs(V))


def fix_signs(V: np.ndarray) -> np.ndarray:
    """每列绝对值最大的元素取正 (并列时取最靠前的元素)"""
    V = V.copy()
    for k in range(V.shape[1]):
        mags = np.abs(V[:, k])
        top = mags.max()
        lead = int(np.flatnonzero(mags >= top * (1.0 - 1e-9))[0])
        if V[lead, k] < 0:
            V[:, k] = -V[:, k]
    return V


def center_columns(X) -> Tuple[np.ndarray, np.ndarray]:
    """列中心化, 返回 (中心化矩阵, 列均值)"""
    X = np.asarray(X, dtype=np.float64)
    means = X.mean(axis=0)
    return X - means, means


def covariance(X, divisor: Literal["n", "n-1"] = "n") -> np.ndarray:
    """样本协方差: 中心化矩阵转置乘自身除以 divisor"""
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if divisor == "n":
        denom = n
    elif divisor == "n-1":
        denom = n - 1
    else:
        raise InvalidHyperparameterError(f"未知的除数: {divisor}")
    if denom < 1:
        raise InsufficientSamplesError(f"样本数 {n} 不足以用除数 {divisor} 估计协方差")
    Xc, _ = center_columns(X)
    C = Xc.T @ Xc / denom
    return 0.5 * (C + C.T)
