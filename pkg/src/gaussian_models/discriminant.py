"""
高斯生成式分类器: 朴素贝叶斯 (各类方差 / 共享方差)、线性判别分析、二次判别分析

四种模型共用对数后验的 w 形式, 省略与类别无关的项:

    score_k(x) = xᵀW_k x + xᵀw_k + w0k

朴素贝叶斯采用各向同性方差 (所有特征共用一个 σ²), 不是逐特征方差。
所有协方差估计都除以样本数, 求逆前在对角线加 1e-9·trace/p。
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from scipy.linalg import cho_solve

from src.core.base import Classifier, persistable
from src.core.data import Labels, as_labels, as_matrix, check_n_features
from src.core.errors import DimensionError, SingularMatrixError
from src.linalg import cholesky_factor, cholesky_logdet
from src.multiclass.multinomial import softmax

logger = logging.getLogger(__name__)

COVARIANCE_JITTER = 1e-9


@persistable("gaussian_kind")
class GaussianKind(str, Enum):
    NB_PER_CLASS_VAR = "nb_per_class_var"
    NB_SHARED_VAR = "nb_shared_var"
    LDA = "lda"
    QDA = "qda"


@persistable("gaussian")
@dataclass(frozen=True)
class GaussianClassifier(Classifier):
    """高斯分类器

    covariances 按 kind 存放: 各类方差 (q,), 共享方差 (1,), LDA 合并协方差 (p, p), QDA 各类协方差 (q, p, p)。
    quadratic 为 W_k, 线性模型 (LDA、共享方差朴素贝叶斯) 为 None。
    """

    kind: GaussianKind
    means: np.ndarray
    covariances: np.ndarray
    priors: np.ndarray
    quadratic: Optional[np.ndarray]
    linear: np.ndarray
    bias: np.ndarray
    classes: Tuple[str, ...]

    @property
    def n_features(self) -> int:
        return int(self.means.shape[1])

    @property
    def is_linear(self) -> bool:
        return self.quadratic is None

    def log_posterior_scores(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_n_features(X, self.n_features)
        S = X @ self.linear.T + self.bias
        if self.quadratic is not None:
            S = S + np.einsum("ni,kij,nj->nk", X, self.quadratic, X)
        return S

    def predict_proba(self, X) -> np.ndarray:
        return softmax(self.log_posterior_scores(X))

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.log_posterior_scores(X), axis=1).astype(np.int64)

    @classmethod
    def from_parameters(cls, kind: GaussianKind, means, covariances, priors, classes) -> "GaussianClassifier":
        """由 (μ, Σ, π) 计算判别系数"""
        kind = GaussianKind(kind)
        means = np.asarray(means, dtype=np.float64)
        covariances = np.asarray(covariances, dtype=np.float64)
        priors = np.asarray(priors, dtype=np.float64)
        q, p = means.shape
        log_priors = np.log(priors)

        if kind in (GaussianKind.NB_PER_CLASS_VAR, GaussianKind.NB_SHARED_VAR):
            variances = covariances if kind == GaussianKind.NB_PER_CLASS_VAR else np.repeat(covariances, q)
            if np.any(variances <= 0):
                raise SingularMatrixError("方差为零, 无法计算判别系数")
            linear = means / variances[:, None]
            bias = -0.5 * np.sum(means * means, axis=1) / variances + log_priors
            quadratic = None
            if kind == GaussianKind.NB_PER_CLASS_VAR:
                bias = bias - 0.5 * p * np.log(variances)
                quadratic = np.stack([-0.5 / v * np.eye(p) for v in variances])
        elif kind == GaussianKind.LDA:
            factor = cholesky_factor(covariances)
            linear = cho_solve(factor, means.T, check_finite=False).T
            bias = -0.5 * np.sum(means * linear, axis=1) + log_priors
            quadratic = None
        else:
            linear = np.empty((q, p))
            bias = np.empty(q)
            quadratic = np.empty((q, p, p))
            for k in range(q):
                factor = cholesky_factor(covariances[k])
                precision = cho_solve(factor, np.eye(p), check_finite=False)
                precision = 0.5 * (precision + precision.T)
                quadratic[k] = -0.5 * precision
                linear[k] = precision @ means[k]
                bias[k] = -0.5 * means[k] @ linear[k] - 0.5 * cholesky_logdet(factor) + log_priors[k]

        return cls(kind, means, covariances, priors, quadratic, linear, bias, tuple(classes))


def _jitter_scalar(v: float) -> float:
    return v + COVARIANCE_JITTER * v


def _jitter_matrix(S: np.ndarray) -> np.ndarray:
    p = S.shape[0]
    return S + COVARIANCE_JITTER * float(np.trace(S)) / p * np.eye(p)


def fit_gaussian(X, labels: Union[Labels, np.ndarray], kind: GaussianKind = GaussianKind.LDA) -> GaussianClassifier:
    """最大似然估计均值、协方差与先验"""
    kind = GaussianKind(kind)
    X = as_matrix(X)
    labels = as_labels(labels)
    if len(labels) != X.shape[0]:
        raise DimensionError(f"标签数 {len(labels)} 与样本数 {X.shape[0]} 不一致")
    labels.require_all_classes(2)

    n, p = X.shape
    q = labels.q
    counts = labels.counts()
    priors = counts / n
    means = np.stack([X[labels.values == k].mean(axis=0) for k in range(q)])
    deviations = X - means[labels.values]

    if kind == GaussianKind.NB_PER_CLASS_VAR:
        sq = np.sum(deviations ** 2, axis=1)
        covariances = np.array([_jitter_scalar(sq[labels.values == k].sum() / (counts[k] * p)) for k in range(q)])
    elif kind == GaussianKind.NB_SHARED_VAR:
        covariances = np.array([_jitter_scalar(float(np.sum(deviations ** 2)) / (n * p))])
    elif kind == GaussianKind.LDA:
        pooled = deviations.T @ deviations / n
        covariances = _jitter_matrix(0.5 * (pooled + pooled.T))
    else:
        blocks = []
        for k in range(q):
            D = deviations[labels.values == k]
            S = D.T @ D / counts[k]
            blocks.append(_jitter_matrix(0.5 * (S + S.T)))
        covariances = np.stack(blocks)

    model = GaussianClassifier.from_parameters(kind, means, covariances, priors, labels.names)
    logger.info("高斯分类器 %s: %d 类, %d 个特征", kind.value, q, p)
    return model


def log_posterior_scores(model: GaussianClassifier, X) -> np.ndarray:
    return model.log_posterior_scores(X)


def gaussian_predict_proba(model: GaussianClassifier, X) -> np.ndarray:
    return model.predict_proba(X)
