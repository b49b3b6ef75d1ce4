"""
k 近邻与半径近邻预测器
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import Field

from src.core.base import HyperParameters, Predictor, Task, persistable
from src.core.data import Labels, as_matrix, as_vector, check_n_features
from src.core.errors import (
    ConfigurationError,
    DimensionError,
    EmptyNeighborhoodError,
    InvalidHyperparameterError,
)
from src.neighbors.index import DEFAULT_LEAF_SIZE, IndexKind, NeighborIndex, build_index
from src.neighbors.weights import WeightScheme, neighbor_weights

logger = logging.getLogger(__name__)


def _vote(label_values: np.ndarray, q: int, weights: np.ndarray) -> Tuple[int, np.ndarray]:
    """加权投票, 并列取最小类别索引"""
    scores = np.bincount(label_values, weights=weights, minlength=q)
    return int(np.argmax(scores)), scores


def knn_predict_regression(index: NeighborIndex, targets, x, k: int,
                           scheme: WeightScheme = WeightScheme.UNIFORM) -> float:
    """近邻目标值的加权平均"""
    targets = as_vector(targets)
    result = index.query_knn(x, k)
    w = neighbor_weights(result.distances, scheme)
    return float(np.dot(w, targets[result.indices]))


def knn_predict_classification(index: NeighborIndex, labels: Labels, x, k: int,
                               scheme: WeightScheme = WeightScheme.UNIFORM) -> Tuple[int, np.ndarray]:
    """加权出现次数最大的类别, 返回 (类别, 各类得分)"""
    result = index.query_knn(x, k)
    w = neighbor_weights(result.distances, scheme)
    return _vote(labels.values[result.indices], labels.q, w)


def radius_predict_regression(index: NeighborIndex, targets, x, r: float,
                              scheme: WeightScheme = WeightScheme.UNIFORM) -> float:
    """半径邻域内目标值的加权平均, 邻域为空时报错"""
    targets = as_vector(targets)
    result = index.query_radius(x, r)
    if len(result) == 0:
        raise EmptyNeighborhoodError(f"半径 {r} 内没有训练样本")
    w = neighbor_weights(result.distances, scheme)
    return float(np.dot(w, targets[result.indices]))


def radius_predict_classification(index: NeighborIndex, labels: Labels, x, r: float,
                                  scheme: WeightScheme = WeightScheme.UNIFORM) -> Tuple[int, np.ndarray]:
    result = index.query_radius(x, r)
    if len(result) == 0:
        raise EmptyNeighborhoodError(f"半径 {r} 内没有训练样本")
    w = neighbor_weights(result.distances, scheme)
    return _vote(labels.values[result.indices], labels.q, w)


@persistable("knn_config")
class KNeighborsConfig(HyperParameters):
    """近邻模型超参数; 给定 radius 时使用半径邻域"""

    k: int = Field(default=5, ge=1, description="近邻数")
    radius: Optional[float] = Field(default=None, gt=0, description="邻域半径")
    weights: WeightScheme = Field(default=WeightScheme.UNIFORM, description="加权方案")
    index: IndexKind = Field(default=IndexKind.KDTREE, description="索引类型")
    leaf_size: int = Field(default=DEFAULT_LEAF_SIZE, ge=1, description="叶子容量")


@persistable("knn")
@dataclass(frozen=True)
class KNeighborsModel(Predictor):
    """近邻模型: 保存训练数据, 索引在首次预测时构建"""

    task: Task
    X: np.ndarray
    y: np.ndarray
    classes: Tuple[str, ...]
    config: KNeighborsConfig

    @cached_property
    def index(self) -> NeighborIndex:
        return build_index(self.X, self.config.index, self.config.leaf_size)

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])

    def _labels(self) -> Labels:
        return Labels(self.y, self.classes)

    def _classify_row(self, x) -> Tuple[int, np.ndarray]:
        cfg = self.config
        if cfg.radius is not None:
            return radius_predict_classification(self.index, self._labels(), x, cfg.radius, cfg.weights)
        return knn_predict_classification(self.index, self._labels(), x, cfg.k, cfg.weights)

    def _regress_row(self, x) -> float:
        cfg = self.config
        if cfg.radius is not None:
            return radius_predict_regression(self.index, self.y, x, cfg.radius, cfg.weights)
        return knn_predict_regression(self.index, self.y, x, cfg.k, cfg.weights)

    def predict(self, X) -> np.ndarray:
        X = as_matrix(X)
        check_n_features(X, self.n_features)
        if self.task == Task.CLASSIFY:
            return np.array([self._classify_row(x)[0] for x in X], dtype=np.int64)
        return np.array([self._regress_row(x) for x in X])

    def predict_proba(self, X) -> np.ndarray:
        if self.task != Task.CLASSIFY:
            raise ConfigurationError("回归近邻模型不支持概率输出")
        X = as_matrix(X)
        check_n_features(X, self.n_features)
        return np.vstack([self._classify_row(x)[1] for x in X])


def fit_knn(X, y: Union[Labels, np.ndarray], config: Optional[KNeighborsConfig] = None) -> KNeighborsModel:
    """近邻模型只保存训练数据; Labels 为分类, 实数向量为回归"""
    config = config or KNeighborsConfig()
    X = as_matrix(X)
    if config.radius is None and config.k > X.shape[0]:
        raise InvalidHyperparameterError(f"k={config.k} 大于样本数 {X.shape[0]}")
    if isinstance(y, Labels):
        if len(y) != X.shape[0]:
            raise DimensionError("标签数与样本数不一致")
        model = KNeighborsModel(Task.CLASSIFY, X, y.values.copy(), y.names, config)
    else:
        targets = as_vector(y)
        if targets.shape[0] != X.shape[0]:
            raise DimensionError("目标数与样本数不一致")
        model = KNeighborsModel(Task.REGRESS, X, targets, (), config)
    logger.info("近邻模型: %d 个样本, 任务 %s", X.shape[0], model.task.value)
    return model
