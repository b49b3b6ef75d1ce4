"""
支持向量机模型记录与预测

决策函数只用支持向量: f(x) = Σ_{i∈SV} α_i K(x, x_i) + b, 支持集为 |α_i| > 1e-9 的样本。
"""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from src.core.base import Predictor, Task, persistable
from src.core.data import as_matrix, check_n_features
from src.core.errors import ConfigurationError
from src.kernel_methods import KernelKind, KernelSpec, gram

SUPPORT_THRESHOLD = 1e-9


def support_indices(alphas: np.ndarray) -> np.ndarray:
    return np.flatnonzero(np.abs(alphas) > SUPPORT_THRESHOLD).astype(np.int64)


@persistable("svm")
@dataclass(frozen=True)
class SvmModel(Predictor):
    """支持向量分类 / 回归模型"""

    task: Task
    kernel: KernelSpec
    C: float
    epsilon: float
    alphas: np.ndarray
    support: np.ndarray
    support_vectors: np.ndarray
    intercept: float = 0.0
    classes: Tuple[str, ...] = ()
    iterations: int = 0
    objective: float = 0.0
    objective_trace: Tuple[float, ...] = field(default=(), compare=False, metadata={"persist": False})

    @property
    def n_features(self) -> int:
        return int(self.support_vectors.shape[1])

    @property
    def support_alphas(self) -> np.ndarray:
        return self.alphas[self.support]

    def decision_function(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_n_features(X, self.n_features)
        if self.support.size == 0:
            return np.full(X.shape[0], self.intercept)
        return gram(self.kernel, X, self.support_vectors) @ self.support_alphas + self.intercept

    def predict(self, X) -> np.ndarray:
        """分类返回类别索引 (分数为 0 时取 −1 类, 即索引 0), 回归返回分数"""
        scores = self.decision_function(X)
        if self.task == Task.CLASSIFY:
            return (scores > 0).astype(np.int64)
        return scores

    def predict_proba(self, X) -> np.ndarray:
        raise ConfigurationError("支持向量机不提供概率输出")


def svm_decision(model: SvmModel, X) -> np.ndarray:
    return model.decision_function(X)


def svm_predict(model: SvmModel, X) -> np.ndarray:
    return model.predict(X)


def primal_weights(model: SvmModel) -> np.ndarray:
    """线性核的原始权重 w = Σ α_i x_i"""
    if model.kernel.kind != KernelKind.LINEAR:
        raise ConfigurationError(f"只有线性核有原始权重, 当前为 {model.kernel.kind.value}")
    return model.support_alphas @ model.support_vectors if model.support.size else np.zeros(model.n_features)


def margin_width(model: SvmModel) -> float:
    """线性核分类间隔宽度 2/‖w‖"""
    norm = float(np.linalg.norm(primal_weights(model)))
    return float("inf") if norm == 0.0 else 2.0 / norm
