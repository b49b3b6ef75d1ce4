# 线性模型模块
from src.linear_models.base import LinearModel, LogisticModel, Penalty, sigmoid
from src.linear_models.logistic import (
    fit_logistic,
    logistic_gradient,
    logistic_loss,
    logistic_objective,
)
from src.linear_models.optim import DescentResult, proximal_gradient, soft_threshold
from src.linear_models.regression import (
    fit_elastic_net,
    fit_lasso,
    fit_ols,
    fit_ridge,
    kkt_residual,
    lasso_lambda_max,
)

__all__ = [
    "DescentResult",
    "LinearModel",
    "LogisticModel",
    "Penalty",
    "fit_elastic_net",
    "fit_lasso",
    "fit_logistic",
    "fit_ols",
    "fit_ridge",
    "kkt_residual",
    "lasso_lambda_max",
    "logistic_gradient",
    "logistic_loss",
    "logistic_objective",
    "proximal_gradient",
    "sigmoid",
    "soft_threshold",
]
