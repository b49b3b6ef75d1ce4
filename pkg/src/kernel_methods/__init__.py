# 核方法模块
from src.kernel_methods.kernels import (
    KernelKind,
    KernelSpec,
    center_cross_gram,
    center_gram,
    gram,
    kernel_eval,
)
from src.kernel_methods.pca import KernelPcaModel, kernel_pca_fit, kernel_pca_transform
from src.kernel_methods.ridge import KernelRidgeModel, fit_kernel_ridge

__all__ = [
    "KernelKind",
    "KernelPcaModel",
    "KernelRidgeModel",
    "KernelSpec",
    "center_cross_gram",
    "center_gram",
    "fit_kernel_ridge",
    "gram",
    "kernel_eval",
    "kernel_pca_fit",
    "kernel_pca_transform",
]
