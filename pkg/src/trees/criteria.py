"""
节点不纯度准则
"""
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import entr

from src.core.base import Task, persistable
from src.core.errors import EmptyPartitionError


@persistable("criterion")
class Criterion(str, Enum):
    GINI = "gini"
    ENTROPY = "entropy"
    MISCLASSIFICATION = "misclassification"
    MSE = "mse"
    MAE = "mae"

    @property
    def task(self) -> Task:
        if self in (Criterion.MSE, Criterion.MAE):
            return Task.REGRESS
        return Task.CLASSIFY


def class_impurity(criterion: Criterion, counts: np.ndarray) -> np.ndarray:
    """由类别计数计算不纯度, counts 形状 (..., q), 最后一维求和"""
    counts = np.asarray(counts, dtype=np.float64)
    totals = counts.sum(axis=-1, keepdims=True)
    p = counts / totals
    if criterion == Criterion.GINI:
        return np.sum(p * (1.0 - p), axis=-1)
    if criterion == Criterion.ENTROPY:
        return np.sum(entr(p), axis=-1)
    if criterion == Criterion.MISCLASSIFICATION:
        return 1.0 - np.max(p, axis=-1)
    raise ValueError(f"{criterion.value} 不是分类准则")


def lower_median(values: np.ndarray) -> float:
    """偶数个元素时取较小的中间元素"""
    s = np.sort(values)
    return float(s[(s.size - 1) // 2])


def impurity(criterion: Criterion, y, n_classes: Optional[int] = None) -> float:
    """节点不纯度: 分类准则的 y 为类别索引, 回归准则的 y 为目标值"""
    criterion = Criterion(criterion)
    y = np.asarray(y)
    if y.size == 0:
        raise EmptyPartitionError("空节点没有不纯度")
    if criterion == Criterion.MSE:
        y = y.astype(np.float64)
        return float(np.mean((y - y.mean()) ** 2))
    if criterion == Criterion.MAE:
        y = y.astype(np.float64)
        return float(np.mean(np.abs(y - lower_median(y))))
    q = n_classes if n_classes is not None else int(y.max()) + 1
    return float(class_impurity(criterion, np.bincount(y.astype(np.int64), minlength=q)))
