"""
二分类基学习器规格 - 多分类元策略通过它训练逻辑回归或支持向量分类
"""
from enum import Enum
from typing import Callable, TypeVar, Union

from pydantic import Field

from src.core.base import HyperParameters, persistable
from src.core.data import Labels
from src.core.errors import ClassicMLError
from src.kernel_methods import KernelSpec
from src.linear_models import LogisticModel, Penalty, fit_logistic
from src.svm import DEFAULT_ITERATIONS, SvmModel, fit_svc

BinaryModel = Union[LogisticModel, SvmModel]
R = TypeVar("R")


@persistable("base_learner")
class BaseLearner(str, Enum):
    LOGISTIC = "logistic"
    SVC = "svc"


@persistable("binary_learner_spec")
class BinaryLearnerSpec(HyperParameters):
    """基学习器及其超参数; 逻辑回归使用 penalty/lam/alpha/max_iter, SVC 使用 kernel/C/iterations"""

    kind: BaseLearner = Field(default=BaseLearner.LOGISTIC, description="基学习器")
    penalty: Penalty = Field(default=Penalty.L2, description="逻辑回归惩罚")
    lam: float = Field(default=1.0, ge=0, description="逻辑回归惩罚强度")
    alpha: float = Field(default=0.5, ge=0, le=1, description="弹性网 ℓ1 占比")
    max_iter: int = Field(default=10_000, ge=1, description="逻辑回归最大迭代次数")
    kernel: KernelSpec = Field(default_factory=KernelSpec, description="SVC 核函数")
    C: float = Field(default=1.0, gt=0, description="SVC 正则参数")
    iterations: int = Field(default=DEFAULT_ITERATIONS, ge=1, description="SVC 迭代次数")

    def fit(self, X, labels: Labels) -> BinaryModel:
        """训练一个二分类器, labels 索引 1 为 +1 类"""
        if self.kind == BaseLearner.LOGISTIC:
            return fit_logistic(X, labels, self.penalty, self.lam, self.alpha, max_iter=self.max_iter)
        return fit_svc(X, labels, self.kernel, self.C, self.iterations)


def tagged(tag: str, fn: Callable[[], R]) -> R:
    """执行子任务, 失败时在异常信息前加上任务标签后原样抛出"""
    try:
        return fn()
    except ClassicMLError as exc:
        message = str(exc.args[0]) if exc.args else type(exc).__name__
        exc.args = (f"[{tag}] {message}",) + tuple(exc.args[1:])
        exc.task_tag = tag
        raise
