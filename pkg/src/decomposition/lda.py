"""
线性判别分析投影

S_w = Σ_k Σ_{i∈k} (x−μ_k)(x−μ_k)ᵀ, S_b = Σ_k n_k (μ_k−μ)(μ_k−μ)ᵀ, n_k 为类别占比。
广义特征问题 S_b w = λ S_w w 用 S_w = LLᵀ 化为对称问题 L⁻¹ S_b L⁻ᵀ u = λ u, w = L⁻ᵀ u。
"""
import logging
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.linalg import solve_triangular

from src.core.base import Transformer, persistable
from src.core.data import Labels, as_labels, as_matrix, check_n_features
from src.core.errors import DegenerateLabelsError, DimensionError, InvalidHyperparameterError
from src.linalg import cholesky_factor, fix_signs, sym_eig

logger = logging.getLogger(__name__)

SCATTER_JITTER = 1e-9


@persistable("lda_projection")
@dataclass(frozen=True)
class LdaProjection(Transformer):
    """components 满足 Wᵀ S_w W = I, 投影前减去整体均值"""

    means: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray
    classes: Tuple[str, ...]

    @property
    def n_components(self) -> int:
        return int(self.components.shape[1])

    def transform(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_n_features(X, self.means.shape[0])
        return (X - self.means) @ self.components


def _prepare(X, labels) -> Tuple[np.ndarray, Labels]:
    X = as_matrix(X)
    labels = as_labels(labels)
    if len(labels) != X.shape[0]:
        raise DimensionError(f"标签数 {len(labels)} 与样本数 {X.shape[0]} 不一致")
    return X, labels


def scatter_matrices(X, labels: Union[Labels, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """类内散度 S_w 与类间散度 S_b; 只有一个类别时 S_b 为零矩阵"""
    X, labels = _prepare(X, labels)
    n, p = X.shape
    mu = X.mean(axis=0)
    within = np.zeros((p, p))
    between = np.zeros((p, p))
    for k in np.unique(labels.values):
        rows = X[labels.values == k]
        mu_k = rows.mean(axis=0)
        D = rows - mu_k
        within += D.T @ D
        diff = (mu_k - mu)[:, None]
        between += rows.shape[0] / n * (diff @ diff.T)
    return 0.5 * (within + within.T), 0.5 * (between + between.T)


def lda_fit_transform(X, labels: Union[Labels, np.ndarray], l: int) -> Tuple[LdaProjection, np.ndarray]:
    """前 l 个广义特征向量 (特征值降序) 及训练数据的投影"""
    X, labels = _prepare(X, labels)
    p = X.shape[1]
    present = np.unique(labels.values).size
    if present < 2:
        raise DegenerateLabelsError(f"线性判别分析至少需要 2 个类别, 实际 {present}")
    if not 1 <= l <= min(present - 1, p):
        raise InvalidHyperparameterError(f"投影维数 l={l} 必须在 1..{min(present - 1, p)} 之间")

    within, between = scatter_matrices(X, labels)
    # S_w 正定时不加扰动, 否则投影随单位变换而变
    factor = cholesky_factor(within, jitter_scale=SCATTER_JITTER)
    L = np.tril(factor[0])
    half = solve_triangular(L, between, lower=True, check_finite=False)
    M = solve_triangular(L, half.T, lower=True, check_finite=False)
    eig = sym_eig(0.5 * (M + M.T))
    W = fix_signs(solve_triangular(L.T, eig.eigenvectors, lower=False, check_finite=False))

    model = LdaProjection(X.mean(axis=0), W[:, :l].copy(), eig.eigenvalues.copy(), labels.names)
    logger.info("线性判别分析: %d 类, 投影到 %d 维, 首个特征值 %.6g", present, l, float(eig.eigenvalues[0]))
    return model, model.transform(X)


def lda_transform(model: LdaProjection, X) -> np.ndarray:
    return model.transform(X)
