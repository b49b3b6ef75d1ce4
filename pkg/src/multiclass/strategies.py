"""
二分类到多分类的元策略: 一对其余、一对一、纠错输出码

各子任务相互独立, 通过 parallel_map 执行, 结果按任务序号排列。
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Tuple, Union

import numpy as np

from src.core.base import Classifier, persistable
from src.core.data import Labels, as_labels, as_matrix
from src.core.distance import squared_distances
from src.core.errors import DegenerateLabelsError, DimensionError, InvalidHyperparameterError
from src.core.parallel import parallel_map
from src.multiclass.base import BinaryLearnerSpec, BinaryModel, tagged
from src.multiclass.codebook import CodeBook, random_codebook

logger = logging.getLogger(__name__)


def _prepare(X, labels) -> Tuple[np.ndarray, Labels]:
    X = as_matrix(X)
    labels = as_labels(labels)
    if len(labels) != X.shape[0]:
        raise DimensionError(f"标签数 {len(labels)} 与样本数 {X.shape[0]} 不一致")
    if labels.q < 2:
        raise DegenerateLabelsError(f"至少需要 2 个类别, 实际 {labels.q}")
    return X, labels


def _score_matrix(models: Tuple[BinaryModel, ...], X) -> np.ndarray:
    X = as_matrix(X)
    return np.column_stack([m.decision_function(X) for m in models])


# ---------------------------------------------------------------- 一对其余

@persistable("ovr")
@dataclass(frozen=True)
class OneVsRestModel(Classifier):
    """第 k 个模型把类别 k 作为 +1"""

    models: Tuple[BinaryModel, ...]
    classes: Tuple[str, ...]
    base: BinaryLearnerSpec

    def decision_scores(self, X) -> np.ndarray:
        return _score_matrix(self.models, X)

    def predict(self, X) -> np.ndarray:
        """取最有把握的模型; 全为负分时仍取最大值, 并列取最小类别索引"""
        return np.argmax(self.decision_scores(X), axis=1).astype(np.int64)


def ovr_fit(X, labels: Union[Labels, np.ndarray], base: Optional[BinaryLearnerSpec] = None) -> OneVsRestModel:
    base = base or BinaryLearnerSpec()
    X, labels = _prepare(X, labels)
    labels.require_all_classes(1)

    def fit_one(k: int) -> BinaryModel:
        return tagged(f"类别 {labels.names[k]}", lambda: base.fit(X, labels.binary([k])))

    models = parallel_map(fit_one, range(labels.q))
    logger.info("一对其余: 训练 %d 个二分类器", labels.q)
    return OneVsRestModel(tuple(models), labels.names, base)


def ovr_predict(model: OneVsRestModel, X) -> np.ndarray:
    return model.predict(X)


# ---------------------------------------------------------------- 一对一

def ovo_decide(scores: np.ndarray, pairs, n_classes: int) -> np.ndarray:
    """多数投票; 票数并列时比较并列类别的置信度之和, 再并列取最小索引

    pairs[c] = (j, k), 分数 > 0 投给 k, 否则投给 j。
    """
    scores = np.atleast_2d(np.asarray(scores, dtype=np.float64))
    n = scores.shape[0]
    votes = np.zeros((n, n_classes), dtype=np.int64)
    confidence = np.zeros((n, n_classes))
    rows = np.arange(n)
    for c, (j, k) in enumerate(pairs):
        s = scores[:, c]
        winner = np.where(s > 0, k, j)
        np.add.at(votes, (rows, winner), 1)
        confidence[:, k] += s
        confidence[:, j] -= s

    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        tied = np.flatnonzero(votes[i] == votes[i].max())
        if tied.size == 1:
            out[i] = tied[0]
        else:
            out[i] = tied[int(np.argmax(confidence[i, tied]))]
    return out


@persistable("ovo")
@dataclass(frozen=True)
class OneVsOneModel(Classifier):
    """pairs[c] = (j, k), j < k; 模型 c 中类别 k 为 +1"""

    models: Tuple[BinaryModel, ...]
    pairs: Tuple[Tuple[int, int], ...]
    pair_sizes: Tuple[int, ...]
    classes: Tuple[str, ...]
    base: BinaryLearnerSpec

    def decision_scores(self, X) -> np.ndarray:
        return _score_matrix(self.models, X)

    def predict(self, X) -> np.ndarray:
        return ovo_decide(self.decision_scores(X), self.pairs, len(self.classes))


def ovo_fit(X, labels: Union[Labels, np.ndarray], base: Optional[BinaryLearnerSpec] = None) -> OneVsOneModel:
    """每对类别只用这两类的样本训练"""
    base = base or BinaryLearnerSpec()
    X, labels = _prepare(X, labels)
    labels.require_all_classes(1)
    pairs = tuple(combinations(range(labels.q), 2))

    def fit_pair(pair: Tuple[int, int]) -> Tuple[BinaryModel, int]:
        j, k = pair
        rows = np.flatnonzero((labels.values == j) | (labels.values == k))
        sub = Labels((labels.values[rows] == k).astype(np.int64), (labels.names[j], labels.names[k]))
        tag = f"类别对 {labels.names[j]}/{labels.names[k]}"
        return tagged(tag, lambda: base.fit(X[rows], sub)), int(rows.size)

    fitted = parallel_map(fit_pair, pairs)
    logger.info("一对一: 训练 %d 个二分类器", len(pairs))
    return OneVsOneModel(
        models=tuple(m for m, _ in fitted),
        pairs=pairs,
        pair_sizes=tuple(size for _, size in fitted),
        classes=labels.names,
        base=base,
    )


def ovo_predict(model: OneVsOneModel, X) -> np.ndarray:
    return model.predict(X)


# ---------------------------------------------------------------- 纠错输出码

def ecoc_decide(scores: np.ndarray, codebook: CodeBook) -> np.ndarray:
    """分数向量与码本各行的欧氏距离最近者, 并列取最小类别索引"""
    scores = np.atleast_2d(np.asarray(scores, dtype=np.float64))
    if scores.shape[1] != codebook.n_tasks:
        raise DimensionError(f"分数列数 {scores.shape[1]} 与码本任务数 {codebook.n_tasks} 不一致")
    distances = squared_distances(scores, codebook.matrix.astype(np.float64))
    return np.argmin(distances, axis=1).astype(np.int64)


@persistable("ecoc")
@dataclass(frozen=True)
class EcocModel(Classifier):
    models: Tuple[BinaryModel, ...]
    codebook: CodeBook
    classes: Tuple[str, ...]
    base: BinaryLearnerSpec
    seed: int = 0

    def decision_scores(self, X) -> np.ndarray:
        return _score_matrix(self.models, X)

    def predict(self, X) -> np.ndarray:
        return ecoc_decide(self.decision_scores(X), self.codebook)


def ecoc_fit(
    X,
    labels: Union[Labels, np.ndarray],
    base: Optional[BinaryLearnerSpec] = None,
    n_tasks: Optional[int] = None,
    seed: int = 0,
    codebook: Optional[CodeBook] = None,
) -> EcocModel:
    """给定码本或按种子随机抽取码本, 每列训练一个二分类器"""
    base = base or BinaryLearnerSpec()
    X, labels = _prepare(X, labels)
    labels.require_all_classes(1)
    if codebook is None:
        if n_tasks is None:
            raise InvalidHyperparameterError("未给定码本时必须指定任务数 m")
        codebook = random_codebook(labels.q, n_tasks, seed)
    elif codebook.n_classes != labels.q:
        raise InvalidHyperparameterError(f"码本行数 {codebook.n_classes} 与类别数 {labels.q} 不一致")

    def fit_column(c: int) -> BinaryModel:
        positive = codebook.positive_classes(c)
        return tagged(f"码本第 {c} 列", lambda: base.fit(X, labels.binary(positive)))

    models = parallel_map(fit_column, range(codebook.n_tasks))
    logger.info("纠错输出码: %d 类, %d 个二分类器", labels.q, codebook.n_tasks)
    return EcocModel(tuple(models), codebook, labels.names, base, int(seed))


def ecoc_predict(model: EcocModel, X) -> np.ndarray:
    return model.predict(X)
