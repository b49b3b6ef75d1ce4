"""
主成分分析
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.core.base import Transformer, persistable
from src.core.data import as_matrix, check_n_features
from src.core.errors import InsufficientSamplesError, InvalidHyperparameterError
from src.linalg import center_columns, sym_eig

logger = logging.getLogger(__name__)


@persistable("pca")
@dataclass(frozen=True)
class PcaModel(Transformer):
    """eigenvalues 为 XcᵀXc 的前 l 个特征值 (未除以样本数), explained_variance 为其除以 n 的值"""

    means: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray
    explained_variance_ratio: np.ndarray
    total_variance: float
    n_samples: int

    @property
    def n_components(self) -> int:
        return int(self.components.shape[1])

    @property
    def explained_variance(self) -> np.ndarray:
        return self.eigenvalues / self.n_samples

    def transform(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_n_features(X, self.means.shape[0])
        return (X - self.means) @ self.components

    def inverse_transform(self, T) -> np.ndarray:
        T = as_matrix(T, name="T")
        check_n_features(T, self.n_components)
        return T @ self.components.T + self.means


def pca_fit(X, l: int) -> PcaModel:
    """中心化后对 XcᵀXc 做特征分解, 取前 l 个特征向量"""
    X = as_matrix(X)
    n, p = X.shape
    if n < 2:
        raise InsufficientSamplesError(f"主成分分析至少需要 2 个样本, 实际 {n}")
    if not 1 <= l <= p:
        raise InvalidHyperparameterError(f"主成分数 l={l} 必须在 1..{p} 之间")
    Xc, means = center_columns(X)
    scatter = Xc.T @ Xc
    eig = sym_eig(0.5 * (scatter + scatter.T))
    eigenvalues = np.maximum(eig.eigenvalues, 0.0)
    total = float(eigenvalues.sum())
    ratios = eigenvalues / total if total > 0 else np.zeros(p)
    model = PcaModel(
        means=means,
        components=eig.eigenvectors[:, :l].copy(),
        eigenvalues=eigenvalues[:l].copy(),
        explained_variance_ratio=ratios[:l].copy(),
        total_variance=total,
        n_samples=n,
    )
    logger.info("主成分分析: %d 个主成分, 累计方差占比 %.4f", l, float(ratios[:l].sum()))
    return model


def pca_transform(model: PcaModel, X) -> np.ndarray:
    return model.transform(X)


def pca_inverse_transform(model: PcaModel, T) -> np.ndarray:
    return model.inverse_transform(T)


def reconstruction_error(model: PcaModel, X) -> float:
    """投影再重构后的平均平方误差 (每个样本的平方误差之和除以 n)"""
    X = as_matrix(X)
    residual = X - model.inverse_transform(model.transform(X))
    return float(np.sum(residual * residual) / X.shape[0])
