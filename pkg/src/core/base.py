"""
模型抽象接口与超参数基类 - 所有算法模块共享
"""
from abc import ABC, abstractmethod
from enum import Enum
from typing import Callable, Dict, Type

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from src.core.errors import ConfigurationError, InvalidHyperparameterError


class Task(str, Enum):
    """学习任务"""

    CLASSIFY = "classify"
    REGRESS = "regress"


class HyperParameters(BaseModel):
    """超参数基类: 不可变, 禁止未知字段, 校验失败统一抛 InvalidHyperparameterError"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    def __init__(self, **data):
        try:
            super().__init__(**data)
        except ValidationError as exc:
            problems = "; ".join(
                f"{'.'.join(str(p) for p in err['loc']) or '?'}: {err['msg']}" for err in exc.errors()
            )
            raise InvalidHyperparameterError(f"{type(self).__name__} 超参数非法 - {problems}") from exc


# 持久化注册表: 标签 -> 类 (数据类、枚举、超参数模型)
_REGISTRY: Dict[str, Type] = {}


def persistable(tag: str) -> Callable[[Type], Type]:
    """注册可写入模型文件的类型"""

    def decorator(cls: Type) -> Type:
        if tag in _REGISTRY and _REGISTRY[tag] is not cls:
            raise ValueError(f"持久化标签重复: {tag}")
        _REGISTRY[tag] = cls
        cls.__persist_tag__ = tag
        return cls

    return decorator


def registered_type(tag: str) -> Type:
    try:
        return _REGISTRY[tag]
    except KeyError:
        raise ConfigurationError(f"未知的持久化类型: {tag}") from None


persistable("task")(Task)


class FittedModel(ABC):
    """训练结果的公共基类 (不可变记录)"""


class Predictor(FittedModel):
    """可预测模型"""

    @abstractmethod
    def predict(self, X: np.ndarray) -> np.ndarray:
        """预测"""


class Classifier(Predictor):
    """分类器: predict 返回类别索引, classes 保存原始类名"""

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        raise ConfigurationError(f"{type(self).__name__} 不支持概率输出")


class DecisionClassifier(Classifier):
    """提供二分类决策分数的分类器, 多分类元策略依赖此接口"""

    @abstractmethod
    def decision_function(self, X: np.ndarray) -> np.ndarray:
        """决策分数, 正值对应 +1 类"""

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.decision_function(X) > 0).astype(np.int64)


class Regressor(Predictor):
    """回归器"""


class Clusterer(Predictor):
    """聚类模型: predict 返回簇索引"""


class Transformer(FittedModel):
    """降维模型"""

    @abstractmethod
    def transform(self, X: np.ndarray) -> np.ndarray:
        """投影"""
