"""
核岭回归: α = (K + λI)^{-1} y, f(x) = Σ α_i K(x, x_i)
"""
import logging
from dataclasses import dataclass

import numpy as np

from src.core.base import Regressor, persistable
from src.core.data import as_matrix, as_vector, check_n_features
from src.core.errors import DimensionError, InvalidHyperparameterError
from src.kernel_methods.kernels import KernelSpec, gram
from src.linalg import solve_spd

logger = logging.getLogger(__name__)


@persistable("kernel_ridge")
@dataclass(frozen=True)
class KernelRidgeModel(Regressor):
    """核岭回归模型 (表示定理形式, 无截距)"""

    X: np.ndarray
    alpha: np.ndarray
    lam: float
    kernel: KernelSpec

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])

    def predict(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_n_features(X, self.n_features)
        return gram(self.kernel, X, self.X) @ self.alpha


def fit_kernel_ridge(X, y, spec: KernelSpec, lam: float) -> KernelRidgeModel:
    if lam <= 0:
        raise InvalidHyperparameterError(f"核岭回归要求 λ > 0, 实际 {lam}")
    X = as_matrix(X)
    y = as_vector(y)
    if y.shape[0] != X.shape[0]:
        raise DimensionError(f"目标数 {y.shape[0]} 与样本数 {X.shape[0]} 不一致")
    K = gram(spec, X)
    alpha = solve_spd(K + lam * np.eye(X.shape[0]), y)
    logger.info("核岭回归: %d 个样本, 核 %s, λ=%g", X.shape[0], spec.kind.value, lam)
    return KernelRidgeModel(X, alpha, float(lam), spec)
