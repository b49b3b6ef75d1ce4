"""
纠错输出码的码本: q×m 的 ±1 矩阵, 行互不相同, 列不恒定
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from src.core.base import persistable
from src.core.errors import InvalidHyperparameterError
from src.core.rng import SeededRng

logger = logging.getLogger(__name__)

MAX_CODEBOOK_RETRIES = 1000


@persistable("codebook")
@dataclass(frozen=True)
class CodeBook:
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=np.int64))
        problem = codebook_problem(self.matrix)
        if problem:
            raise InvalidHyperparameterError(f"码本非法: {problem}")

    @property
    def n_classes(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def n_tasks(self) -> int:
        return int(self.matrix.shape[1])

    def positive_classes(self, column: int) -> list:
        """第 column 个二分类任务中取 +1 的类别"""
        return np.flatnonzero(self.matrix[:, column] == 1).tolist()


def codebook_problem(matrix: np.ndarray) -> str:
    """返回违反的约束说明, 合法时返回空串"""
    if matrix.ndim != 2 or matrix.shape[0] < 2 or matrix.shape[1] < 1:
        return f"形状必须为 q×m (q ≥ 2, m ≥ 1), 实际 {matrix.shape}"
    if not np.all(np.isin(matrix, (-1, 1))):
        return "元素只能是 ±1"
    if len({tuple(row) for row in matrix.tolist()}) < matrix.shape[0]:
        return "存在相同的行"
    if np.any(np.all(matrix == matrix[:1], axis=0)):
        return "存在恒定的列"
    return ""


def random_codebook(n_classes: int, n_tasks: int, seed: int) -> CodeBook:
    """均匀随机抽取 ±1 码本, 不满足约束则重抽"""
    minimum = math.ceil(math.log2(n_classes)) if n_classes > 1 else 1
    if n_tasks < minimum:
        raise InvalidHyperparameterError(f"{n_classes} 个类别至少需要 {minimum} 个二分类任务, 实际 {n_tasks}")
    rng = SeededRng(seed)
    for attempt in range(1, MAX_CODEBOOK_RETRIES + 1):
        matrix = np.where(rng.random(n_classes * n_tasks) < 0.5, -1, 1).reshape(n_classes, n_tasks)
        if not codebook_problem(matrix):
            logger.debug("码本抽样成功: 第 %d 次", attempt)
            return CodeBook(matrix)
    raise InvalidHyperparameterError(f"{MAX_CODEBOOK_RETRIES} 次重抽仍无法得到合法的 {n_classes}×{n_tasks} 码本")


def one_vs_rest_codebook(n_classes: int) -> CodeBook:
    """第 k 列仅在第 k 行为 +1"""
    return CodeBook(2 * np.eye(n_classes, dtype=np.int64) - 1)
