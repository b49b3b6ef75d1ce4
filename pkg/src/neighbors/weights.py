"""
近邻加权方案
"""
from enum import Enum

import numpy as np

from src.core.base import persistable
from src.core.errors import DataError, EmptyNeighborhoodError


@persistable("weight_scheme")
class WeightScheme(str, Enum):
    """近邻权重: 均匀或与距离成反比"""

    UNIFORM = "uniform"
    INVERSE = "inverse"


def neighbor_weights(distances, scheme: WeightScheme = WeightScheme.UNIFORM) -> np.ndarray:
    """归一化权重; 反距离加权时若存在零距离, 零距离近邻平分全部权重"""
    d = np.asarray(distances, dtype=np.float64).reshape(-1)
    if d.size == 0:
        raise EmptyNeighborhoodError("邻域为空, 无法计算权重")
    if np.any(d < 0):
        raise DataError("距离不能为负")

    if WeightScheme(scheme) == WeightScheme.UNIFORM:
        return np.full(d.size, 1.0 / d.size)

    zero = d == 0.0
    if zero.any():
        return zero / zero.sum()
    inverse = 1.0 / d
    return inverse / inverse.sum()
