"""
线性模型记录与公共函数
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np

from src.core.base import DecisionClassifier, Regressor, persistable
from src.core.data import as_matrix, check_n_features


@persistable("penalty")
class Penalty(str, Enum):
    """惩罚类型"""

    NONE = "none"
    L2 = "l2"
    L1 = "l1"
    ELASTIC_NET = "elastic_net"


def penalty_mix(penalty: Penalty, alpha: float) -> float:
    """返回 ℓ1 占比 α: l2 为 0, l1 为 1, elastic_net 取给定值"""
    if penalty == Penalty.L1:
        return 1.0
    if penalty == Penalty.ELASTIC_NET:
        return float(alpha)
    return 0.0


def sigmoid(f) -> np.ndarray:
    """分段稳定的 sigmoid: f ≥ 0 用 1/(1+e^-f), 否则 e^f/(1+e^f)"""
    f = np.asarray(f, dtype=np.float64)
    out = np.empty_like(f)
    pos = f >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-f[pos]))
    ef = np.exp(f[~pos])
    out[~pos] = ef / (1.0 + ef)
    return out


def add_intercept_column(X: np.ndarray) -> np.ndarray:
    return np.hstack([np.ones((X.shape[0], 1)), X])


@persistable("linear")
@dataclass(frozen=True)
class LinearModel(Regressor):
    """仿射回归模型 ŷ = w0 + Σ w_j x_j"""

    intercept: float
    coef: np.ndarray
    penalty: Penalty = Penalty.NONE
    lam: float = 0.0
    alpha: float = 0.0
    fit_intercept: bool = True
    n_iter: int = 0

    @property
    def n_features(self) -> int:
        return int(self.coef.shape[0])

    def predict(self, X) -> np.ndarray:
        X = as_matrix(X, allow_empty_columns=True)
        check_n_features(X, self.n_features)
        return self.intercept + X @ self.coef


@persistable("logistic")
@dataclass(frozen=True)
class LogisticModel(DecisionClassifier):
    """二分类逻辑回归: 索引 1 为 +1 类"""

    intercept: float
    coef: np.ndarray
    classes: Tuple[str, ...]
    penalty: Penalty = Penalty.NONE
    lam: float = 0.0
    alpha: float = 0.0
    n_iter: int = 0
    objective_trace: Tuple[float, ...] = field(default=(), compare=False, metadata={"persist": False})

    @property
    def n_features(self) -> int:
        return int(self.coef.shape[0])

    def decision_function(self, X) -> np.ndarray:
        """带符号距离 f(x) = w0 + wᵀx"""
        X = as_matrix(X)
        check_n_features(X, self.n_features)
        return self.intercept + X @ self.coef

    def predict_proba(self, X) -> np.ndarray:
        """两列概率 [P(-1|x), P(+1|x)]"""
        p = sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p, p])
