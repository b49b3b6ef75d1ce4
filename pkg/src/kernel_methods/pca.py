"""
核主成分分析

训练 Gram 矩阵双中心化后做特征分解, α_k = u_k / √λ_k 使特征空间方向为单位向量。
新样本 z 的投影: (K(z, X) − mean_i K(z, x_i) − 训练列均值 + 训练总均值) · α。
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.base import Transformer, persistable
from src.core.data import as_matrix, check_n_features
from src.core.errors import InvalidHyperparameterError
from src.kernel_methods.kernels import KernelSpec, center_cross_gram, center_gram, gram
from src.linalg import sym_eig

logger = logging.getLogger(__name__)

EIGENVALUE_FLOOR = 1e-10


@persistable("kernel_pca")
@dataclass(frozen=True)
class KernelPcaModel(Transformer):
    X: np.ndarray
    kernel: KernelSpec
    alphas: np.ndarray
    eigenvalues: np.ndarray
    train_col_means: np.ndarray
    train_mean: float
    warning: Optional[str] = None

    @property
    def n_components(self) -> int:
        return int(self.alphas.shape[1])

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])

    def transform(self, X) -> np.ndarray:
        Z = as_matrix(X)
        check_n_features(Z, self.n_features)
        K_cross = gram(self.kernel, Z, self.X)
        return center_cross_gram(K_cross, self.train_col_means, self.train_mean) @ self.alphas


def kernel_pca_fit(X, spec: KernelSpec, n_components: int) -> KernelPcaModel:
    """保留前 n_components 个主成分; 正特征值不足时降秩并记录警告"""
    X = as_matrix(X)
    n = X.shape[0]
    if not 1 <= n_components <= n:
        raise InvalidHyperparameterError(f"主成分数须在 1..{n} 之间, 实际 {n_components}")

    K = gram(spec, X)
    eig = sym_eig(center_gram(K))
    leading = eig.eigenvalues[:n_components]
    kept = int(np.count_nonzero(leading > EIGENVALUE_FLOOR))
    warning = None
    if kept < n_components:
        warning = f"仅有 {kept} 个特征值大于 {EIGENVALUE_FLOOR:g}, 主成分数由 {n_components} 降为 {kept}"
        logger.warning(warning)

    eigenvalues = eig.eigenvalues[:kept].copy()
    alphas = eig.eigenvectors[:, :kept] / np.sqrt(eigenvalues)[None, :]
    return KernelPcaModel(
        X=X,
        kernel=spec,
        alphas=alphas,
        eigenvalues=eigenvalues,
        train_col_means=K.mean(axis=0),
        train_mean=float(K.mean()),
        warning=warning,
    )


def kernel_pca_transform(model: KernelPcaModel, Z) -> np.ndarray:
    return model.transform(Z)
