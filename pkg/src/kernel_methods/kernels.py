"""
核函数与 Gram 矩阵

    linear      xᵀx'
    polynomial  (γ xᵀx' + c0)^d
    sigmoid     tanh(γ xᵀx' + c0)      一般不是半正定
    rbf         exp(−γ ‖x − x'‖²)
"""
import logging
from enum import Enum

import numpy as np
from pydantic import Field
from scipy.spatial.distance import cdist

from src.core.base import HyperParameters, persistable
from src.core.data import as_matrix, as_vector
from src.core.errors import DimensionError
from src.core.parallel import parallel_map

logger = logging.getLogger(__name__)

# 按行分块并行计算 Gram 矩阵的块大小
GRAM_BLOCK_ROWS = 256


@persistable("kernel_kind")
class KernelKind(str, Enum):
    """核函数类型"""

    LINEAR = "linear"
    POLYNOMIAL = "polynomial"
    SIGMOID = "sigmoid"
    RBF = "rbf"


@persistable("kernel_spec")
class KernelSpec(HyperParameters):
    """核函数参数; linear 忽略全部参数, rbf 忽略 c0 和 degree"""

    kind: KernelKind = Field(default=KernelKind.RBF, description="核函数类型")
    gamma: float = Field(default=1.0, gt=0, description="尺度 γ")
    c0: float = Field(default=0.0, ge=0, description="常数项 c0")
    degree: int = Field(default=3, ge=1, description="多项式次数 d")


def _block(spec: KernelSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if spec.kind == KernelKind.RBF:
        return np.exp(-spec.gamma * cdist(A, B, "sqeuclidean"))
    inner = A @ B.T
    if spec.kind == KernelKind.LINEAR:
        return inner
    if spec.kind == KernelKind.POLYNOMIAL:
        return (spec.gamma * inner + spec.c0) ** spec.degree
    return np.tanh(spec.gamma * inner + spec.c0)


def gram(spec: KernelSpec, A, B=None) -> np.ndarray:
    """n×m 核矩阵 K[i, j] = K(a_i, b_j); 省略 B 时为对称的训练 Gram 矩阵"""
    A = as_matrix(A, name="A")
    symmetric = B is None
    B = A if symmetric else as_matrix(B, name="B")
    if A.shape[1] != B.shape[1]:
        raise DimensionError(f"核函数输入维数不一致: {A.shape[1]} 与 {B.shape[1]}")

    starts = range(0, A.shape[0], GRAM_BLOCK_ROWS)
    blocks = parallel_map(lambda s: _block(spec, A[s:s + GRAM_BLOCK_ROWS], B), starts)
    K = np.vstack(blocks)
    if symmetric:
        K = 0.5 * (K + K.T)
    return K


def kernel_eval(spec: KernelSpec, x, x_other) -> float:
    """单对样本的核函数值"""
    x = as_vector(x, name="x")
    x_other = as_vector(x_other, name="x'")
    if x.shape != x_other.shape:
        raise DimensionError(f"核函数输入维数不一致: {x.shape[0]} 与 {x_other.shape[0]}")
    return float(_block(spec, x[None, :], x_other[None, :])[0, 0])


def center_gram(K) -> np.ndarray:
    """双中心化 K̃ = K − 1K − K1 + 1K1 (1 为元素全为 1/n 的矩阵)"""
    K = np.asarray(K, dtype=np.float64)
    row = K.mean(axis=1, keepdims=True)
    col = K.mean(axis=0, keepdims=True)
    centered = K - row - col + K.mean()
    return 0.5 * (centered + centered.T)


def center_cross_gram(K_cross, train_col_means: np.ndarray, train_mean: float) -> np.ndarray:
    """与训练中心化一致的交叉核矩阵中心化

    K_cross 为 m×n 的 K(z, x_i); 结果为 K_cross − 行均值 − 训练列均值 + 训练总均值。
    """
    K_cross = np.asarray(K_cross, dtype=np.float64)
    return K_cross - K_cross.mean(axis=1, keepdims=True) - train_col_means[None, :] + train_mean
