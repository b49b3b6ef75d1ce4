# 支持向量机模块
from src.svm.model import (
    SUPPORT_THRESHOLD,
    SvmModel,
    margin_width,
    primal_weights,
    svm_decision,
    svm_predict,
)
from src.svm.solver import (
    DEFAULT_ITERATIONS,
    eps_insensitive_loss,
    fit_svc,
    fit_svr,
    hinge_loss,
    svm_objective,
)

__all__ = [
    "DEFAULT_ITERATIONS",
    "SUPPORT_THRESHOLD",
    "SvmModel",
    "eps_insensitive_loss",
    "fit_svc",
    "fit_svr",
    "hinge_loss",
    "margin_width",
    "primal_weights",
    "svm_decision",
    "svm_objective",
    "svm_predict",
]
