"""
高斯混合模型 (EM 算法)

E 步在对数空间计算后验 γ_i(j), 用 logsumexp 归一化; M 步更新权重、均值与协方差,
每个协方差对角线加 1e-6·trace/p。
"""
import logging
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from pydantic import Field
from scipy.linalg import solve_triangular
from scipy.special import logsumexp

from src.clustering.kmeans import kmeans_pp_init
from src.core.base import Clusterer, HyperParameters, persistable
from src.core.data import as_matrix, check_n_features
from src.core.errors import DegenerateComponentError, InvalidHyperparameterError
from src.core.rng import SeededRng
from src.linalg import cholesky_factor, cholesky_logdet, covariance

logger = logging.getLogger(__name__)

GMM_JITTER = 1e-6
MIN_WEIGHT = 1e-12


@persistable("gmm_config")
class GmmConfig(HyperParameters):
    k: int = Field(..., ge=1, description="成分数")
    max_iter: int = Field(default=200, ge=1, description="最大迭代次数")
    tol: float = Field(default=1e-6, gt=0, description="对数似然变化量阈值")
    seed: int = Field(default=0, ge=0, description="随机种子")


@persistable("gmm")
@dataclass(frozen=True)
class GmmModel(Clusterer):
    means: np.ndarray
    covariances: np.ndarray
    weights: np.ndarray
    log_likelihood: float
    iterations: int
    converged: bool
    config: GmmConfig
    log_likelihood_path: Tuple[float, ...] = field(default=(), compare=False, metadata={"persist": False})

    @property
    def k(self) -> int:
        return int(self.means.shape[0])

    def _weighted_log_density(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_n_features(X, self.means.shape[1])
        return weighted_log_density(X, self.means, self.covariances, self.weights)

    def responsibilities(self, X) -> np.ndarray:
        log_w = self._weighted_log_density(X)
        return np.exp(log_w - logsumexp(log_w, axis=1, keepdims=True))

    def score(self, X) -> float:
        """总对数似然"""
        return float(logsumexp(self._weighted_log_density(X), axis=1).sum())

    def predict(self, X) -> np.ndarray:
        return np.argmax(self._weighted_log_density(X), axis=1).astype(np.int64)


def _jittered(S: np.ndarray) -> np.ndarray:
    S = 0.5 * (S + S.T)
    p = S.shape[0]
    return S + GMM_JITTER * float(np.trace(S)) / p * np.eye(p)


def weighted_log_density(X: np.ndarray, means: np.ndarray, covariances: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """log π_j + log N(x_i; μ_j, Σ_j), 形状 (n, k)"""
    n, p = X.shape
    out = np.empty((n, means.shape[0]))
    for j in range(means.shape[0]):
        factor = cholesky_factor(covariances[j])
        z = solve_triangular(factor[0], (X - means[j]).T, lower=True, check_finite=False)
        maha = np.sum(z * z, axis=0)
        out[:, j] = np.log(weights[j]) - 0.5 * (p * np.log(2 * np.pi) + cholesky_logdet(factor) + maha)
    return out


def _m_step(X: np.ndarray, resp: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = X.shape[0]
    totals = resp.sum(axis=0)
    weights = totals / n
    collapsed = np.flatnonzero(weights < MIN_WEIGHT)
    if collapsed.size:
        raise DegenerateComponentError(int(collapsed[0]))
    means = resp.T @ X / totals[:, None]
    covariances = np.empty((means.shape[0], X.shape[1], X.shape[1]))
    for j in range(means.shape[0]):
        D = X - means[j]
        covariances[j] = _jittered((resp[:, j, None] * D).T @ D / totals[j])
    return means, covariances, weights


def gmm_fit_em(X, k: int, max_iter: int = 200, tol: float = 1e-6, seed: int = 0) -> GmmModel:
    """均值用 k-means++ 初始化, 协方差为整体 MLE 协方差, 权重均匀; |Δ 对数似然| < tol 时停止"""
    config = GmmConfig(k=k, max_iter=max_iter, tol=tol, seed=seed)
    X = as_matrix(X)
    n, p = X.shape
    if config.k > n:
        raise InvalidHyperparameterError(f"成分数 k={config.k} 超过样本数 {n}")

    means = kmeans_pp_init(X, config.k, SeededRng(config.seed))
    shared = _jittered(covariance(X, "n")) if n > 1 else np.eye(p)
    covariances = np.repeat(shared[None], config.k, axis=0)
    weights = np.full(config.k, 1.0 / config.k)

    path = []
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iter + 1):
        log_w = weighted_log_density(X, means, covariances, weights)
        norm = logsumexp(log_w, axis=1, keepdims=True)
        ll = float(norm.sum())
        resp = np.exp(log_w - norm)
        means, covariances, weights = _m_step(X, resp)
        logger.debug("EM 第 %d 次迭代, 对数似然 %.10g", iterations, ll)
        if path and abs(ll - path[-1]) < config.tol:
            path.append(ll)
            converged = True
            break
        path.append(ll)

    final = float(logsumexp(weighted_log_density(X, means, covariances, weights), axis=1).sum())
    if not converged:
        logger.warning("EM 在 %d 次迭代内未收敛", config.max_iter)
    logger.info("高斯混合 (k=%d): 迭代 %d 次, 对数似然 %.6g", config.k, iterations, final)
    return GmmModel(means, covariances, weights, final, iterations, converged, config, tuple(path))


def gmm_responsibilities(model: GmmModel, X) -> np.ndarray:
    return model.responsibilities(X)


def gmm_predict(model: GmmModel, X) -> np.ndarray:
    return model.predict(X)
