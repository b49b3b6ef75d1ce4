"""
数据模型 - 样本矩阵、类别标签、回归目标
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.errors import (
    DataError,
    DegenerateLabelsError,
    DimensionError,
    EmptyDatasetError,
)


def as_matrix(X, *, allow_empty_columns: bool = False, name: str = "X") -> np.ndarray:
    """转换为 float64 二维数组并检查有限性"""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionError(f"{name} 必须是二维矩阵, 实际维数 {arr.ndim}")
    if arr.shape[0] == 0:
        raise EmptyDatasetError(f"{name} 没有样本")
    if arr.shape[1] == 0 and not allow_empty_columns:
        raise DimensionError(f"{name} 没有特征列")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} 含有 NaN 或无穷值")
    return np.ascontiguousarray(arr)


def as_vector(v, *, name: str = "y") -> np.ndarray:
    """转换为 float64 一维数组并检查有限性"""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} 含有 NaN 或无穷值")
    return arr


def check_n_features(X: np.ndarray, n_features: int) -> None:
    """预测时检查特征数"""
    if X.shape[1] != n_features:
        raise DimensionError(f"特征数不匹配: 模型需要 {n_features}, 输入为 {X.shape[1]}")


@dataclass(frozen=True)
class Labels:
    """类别标签: values 为 0..q-1 的类别索引, names 为原始字符串

    二分类时索引 0 对应 -1 类, 索引 1 对应 +1 类。
    """

    values: np.ndarray
    names: Tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.int64).reshape(-1)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", tuple(str(n) for n in self.names))
        if values.size and (values.min() < 0 or values.max() >= len(self.names)):
            raise DataError(f"类别索引越界: 允许范围 0..{len(self.names) - 1}")

    @property
    def q(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def decode(self, indices: Optional[Iterable[int]] = None) -> list:
        """索引还原为原始字符串"""
        idx = self.values if indices is None else np.asarray(indices, dtype=np.int64)
        return [self.names[i] for i in idx]

    def counts(self) -> np.ndarray:
        return np.bincount(self.values, minlength=self.q)

    def signs(self) -> np.ndarray:
        """二分类 ±1 编码 (索引 1 ⇔ +1)"""
        if self.q != 2:
            raise DegenerateLabelsError(f"需要二分类标签, 实际类别数 {self.q}")
        return np.where(self.values == 1, 1.0, -1.0)

    def require_all_classes(self, minimum: int = 1) -> None:
        """训练标签要求每个类别至少出现 minimum 次"""
        counts = self.counts()
        short = [self.names[k] for k in range(self.q) if counts[k] < minimum]
        if short:
            raise DegenerateLabelsError(f"类别 {short} 的样本数少于 {minimum}")

    def subset(self, rows: np.ndarray) -> "Labels":
        return Labels(self.values[rows], self.names)

    def binary(self, positive: Sequence[int], negative_name: str = "rest") -> "Labels":
        """二值化: positive 中的类别映射为索引 1 (+1), 其余为 0 (-1)"""
        mask = np.isin(self.values, np.asarray(positive, dtype=np.int64))
        pos_name = "+".join(self.names[k] for k in positive)
        return Labels(mask.astype(np.int64), (negative_name, pos_name))


def encode_labels(raw: Sequence) -> Labels:
    """按首次出现顺序编码类别"""
    raw = [str(r) for r in raw]
    if not raw:
        raise EmptyDatasetError("标签为空")
    index = {}
    values = np.empty(len(raw), dtype=np.int64)
    for i, r in enumerate(raw):
        if r not in index:
            index[r] = len(index)
        values[i] = index[r]
    return Labels(values, tuple(index))


def as_labels(y: Union[Labels, Sequence, np.ndarray]) -> Labels:
    """接受 Labels 或整数索引数组"""
    if isinstance(y, Labels):
        return y
    values = np.asarray(y)
    if values.dtype.kind in "iu":
        q = int(values.max()) + 1 if values.size else 0
        return Labels(values, tuple(str(k) for k in range(q)))
    return encode_labels(list(values))


@dataclass(frozen=True)
class Dataset:
    """样本矩阵加可选的标签或回归目标"""

    X: np.ndarray
    feature_names: Tuple[str, ...]
    labels: Optional[Labels] = None
    targets: Optional[np.ndarray] = None
    label_name: Optional[str] = None

    def __post_init__(self):
        n = self.X.shape[0]
        if self.labels is not None and len(self.labels) != n:
            raise DimensionError(f"标签数 {len(self.labels)} 与样本数 {n} 不一致")
        if self.targets is not None and self.targets.shape[0] != n:
            raise DimensionError(f"目标数 {self.targets.shape[0]} 与样本数 {n} 不一致")

    @property
    def n_samples(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1])

    @property
    def supervised(self) -> bool:
        return self.labels is not None or self.targets is not None
