"""
距离度量

所有平方距离按特征列顺序逐列累加, 因此暴力搜索、k-d 树、球树、
Lloyd 与 Elkan 得到的同一对样本的距离逐位相同。
"""
from enum import Enum

import numpy as np

from src.core.errors import DimensionError


class Metric(str, Enum):
    """距离度量 (目前只有欧氏距离)"""

    EUCLIDEAN = "euclidean"


def squared_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """A 的每一行到 B 的每一行的平方欧氏距离, 形状 (n, m)"""
    if A.shape[1] != B.shape[1]:
        raise DimensionError(f"特征数不一致: {A.shape[1]} 与 {B.shape[1]}")
    acc = np.zeros((A.shape[0], B.shape[0]), dtype=np.float64)
    for j in range(A.shape[1]):
        diff = np.subtract.outer(A[:, j], B[:, j])
        acc += diff * diff
    return acc


def row_sq_distances(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    """A 的每一行到单个点 x 的平方距离"""
    if A.shape[1] != x.shape[0]:
        raise DimensionError(f"特征数不一致: {A.shape[1]} 与 {x.shape[0]}")
    acc = np.zeros(A.shape[0], dtype=np.float64)
    for j in range(A.shape[1]):
        diff = A[:, j] - x[j]
        acc += diff * diff
    return acc


def paired_sq_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """逐行配对的平方距离: A[i] 与 B[i]"""
    acc = np.zeros(A.shape[0], dtype=np.float64)
    for j in range(A.shape[1]):
        diff = A[:, j] - B[:, j]
        acc += diff * diff
    return acc


def euclidean_distance(a, b) -> float:
    """两个向量的欧氏距离"""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise DimensionError(f"向量长度不一致: {a.shape[0]} 与 {b.shape[0]}")
    return float(np.sqrt(row_sq_distances(a.reshape(1, -1), b)[0]))
