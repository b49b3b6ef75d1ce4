# 高斯生成式分类器模块
from src.gaussian_models.discriminant import (
    COVARIANCE_JITTER,
    GaussianClassifier,
    GaussianKind,
    fit_gaussian,
    gaussian_predict_proba,
    log_posterior_scores,
)

__all__ = [
    "COVARIANCE_JITTER",
    "GaussianClassifier",
    "GaussianKind",
    "fit_gaussian",
    "gaussian_predict_proba",
    "log_posterior_scores",
]
