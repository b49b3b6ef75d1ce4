"""
评估指标
"""
import numpy as np

from src.core.errors import DimensionError


def _pair(y_true, y_pred):
    a = np.asarray(y_true).reshape(-1)
    b = np.asarray(y_pred).reshape(-1)
    if a.shape != b.shape:
        raise DimensionError(f"长度不一致: {a.shape[0]} 与 {b.shape[0]}")
    return a, b


def accuracy(y_true, y_pred) -> float:
    a, b = _pair(y_true, y_pred)
    return float(np.mean(a == b))


def mean_squared_error(y_true, y_pred) -> float:
    a, b = _pair(y_true, y_pred)
    return float(np.mean((a.astype(float) - b) ** 2))


def mean_absolute_error(y_true, y_pred) -> float:
    a, b = _pair(y_true, y_pred)
    return float(np.mean(np.abs(a.astype(float) - b)))
