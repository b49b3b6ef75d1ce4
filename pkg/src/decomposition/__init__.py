# 降维模块
from src.decomposition.lda import LdaProjection, lda_fit_transform, lda_transform, scatter_matrices
from src.decomposition.pca import (
    PcaModel,
    pca_fit,
    pca_inverse_transform,
    pca_transform,
    reconstruction_error,
)

__all__ = [
    "LdaProjection",
    "PcaModel",
    "lda_fit_transform",
    "lda_transform",
    "pca_fit",
    "pca_inverse_transform",
    "pca_transform",
    "reconstruction_error",
    "scatter_matrices",
]
