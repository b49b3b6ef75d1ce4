"""
近邻索引: 暴力搜索、k-d 树、球树

两种树共用同一划分规则: 在跨度最大的维度上按下中位数切分,
阈值左侧取 ≤ 阈值的点。k-d 树节点保存包围盒, 球树节点保存中心与半径。
剪枝只在下界严格超过当前第 k 近距离 (或 ≥ 查询半径) 时发生,
所以树查询结果与暴力搜索完全一致, 包括距离并列时按索引排序。
"""
import heapq
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Tuple

import numpy as np

from src.core.base import persistable
from src.core.data import as_matrix
from src.core.distance import row_sq_distances
from src.core.errors import DimensionError, InvalidHyperparameterError

logger = logging.getLogger(__name__)

DEFAULT_LEAF_SIZE = 30
# 下界的相对松弛量, 保证浮点误差不会导致错误剪枝
_BOUND_SLACK = 1e-9


@persistable("index_kind")
class IndexKind(str, Enum):
    """索引类型"""

    BRUTE = "brute"
    KDTREE = "kdtree"
    BALLTREE = "balltree"


@dataclass(frozen=True)
class NeighborQueryResult:
    """查询结果: 距离升序, 距离相同按训练索引升序"""

    indices: np.ndarray
    distances: np.ndarray

    def __len__(self) -> int:
        return int(self.indices.shape[0])


@dataclass(frozen=True)
class IndexNode:
    """树节点视图 (用于审计)"""

    node_id: int
    members: np.ndarray
    is_leaf: bool
    split_dim: int
    threshold: float
    left: int
    right: int
    lower: np.ndarray
    upper: np.ndarray
    center: np.ndarray
    radius: float


class NeighborIndex:
    """已构建的近邻索引, 构建后只读, 可并发查询"""

    def __init__(self, X: np.ndarray, kind: IndexKind, leaf_size: int):
        self.X = X
        self.kind = kind
        self.leaf_size = leaf_size
        self.n_samples, self.n_features = X.shape
        self._perm = np.arange(self.n_samples)
        self._start: List[int] = []
        self._end: List[int] = []
        self._left: List[int] = []
        self._right: List[int] = []
        self._dim: List[int] = []
        self._threshold: List[float] = []
        self._lower: List[np.ndarray] = []
        self._upper: List[np.ndarray] = []
        self._center: List[np.ndarray] = []
        self._radius: List[float] = []
        if kind != IndexKind.BRUTE:
            self._build()

    # ------------------------------------------------------------ 构建

    def _new_node(self, start: int, end: int) -> int:
        pts = self.X[self._perm[start:end]]
        center = pts.mean(axis=0)
        self._start.append(start)
        self._end.append(end)
        self._left.append(-1)
        self._right.append(-1)
        self._dim.append(-1)
        self._threshold.append(0.0)
        self._lower.append(pts.min(axis=0))
        self._upper.append(pts.max(axis=0))
        self._center.append(center)
        self._radius.append(float(np.sqrt(row_sq_distances(pts, center).max())))
        return len(self._start) - 1

    def _build(self) -> None:
        stack = [self._new_node(0, self.n_samples)]
        while stack:
            node = stack.pop()
            start, end = self._start[node], self._end[node]
            count = end - start
            spread = self._upper[node] - self._lower[node]
            dim = int(np.argmax(spread))
            if count <= self.leaf_size or spread[dim] == 0.0:
                continue

            idx = self._perm[start:end]
            values = self.X[idx, dim]
            ordered = np.sort(values, kind="stable")
            threshold = ordered[(count - 1) // 2]
            if threshold == ordered[-1]:
                # 右侧为空时阈值退到下一个更小的不同值
                threshold = ordered[ordered < threshold][-1]
            go_left = values <= threshold
            self._perm[start:end] = np.concatenate([idx[go_left], idx[~go_left]])
            mid = start + int(go_left.sum())

            self._dim[node] = dim
            self._threshold[node] = float(threshold)
            self._left[node] = self._new_node(start, mid)
            self._right[node] = self._new_node(mid, end)
            stack.extend([self._right[node], self._left[node]])
        logger.debug("%s 索引构建完成: %d 个点, %d 个节点", self.kind.value, self.n_samples, len(self._start))

    # ------------------------------------------------------------ 查询

    def _lower_bound(self, node: int, x: np.ndarray) -> float:
        """查询点到节点内任意点距离的保守下界"""
        if self.kind == IndexKind.KDTREE:
            gap = np.maximum(np.maximum(self._lower[node] - x, x - self._upper[node]), 0.0)
            return float(np.sqrt(np.dot(gap, gap))) * (1.0 - _BOUND_SLACK)
        to_center = float(np.sqrt(row_sq_distances(self._center[node].reshape(1, -1), x)[0]))
        radius = self._radius[node]
        return max(0.0, to_center - radius - _BOUND_SLACK * (to_center + radius))

    def _members(self, node: int) -> np.ndarray:
        return self._perm[self._start[node]:self._end[node]]

    def _check_query(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.n_features:
            raise DimensionError(f"查询点维度 {x.shape[0]} 与索引维度 {self.n_features} 不一致")
        return x

    def query_knn(self, x, k: int) -> NeighborQueryResult:
        """k 近邻查询"""
        x = self._check_query(x)
        if not 1 <= k <= self.n_samples:
            raise InvalidHyperparameterError(f"k={k} 超出范围 1..{self.n_samples}")

        if self.kind == IndexKind.BRUTE:
            d2 = row_sq_distances(self.X, x)
            order = np.lexsort((np.arange(self.n_samples), d2))[:k]
            return NeighborQueryResult(order.astype(np.int64), np.sqrt(d2[order]))

        best_idx = np.empty(0, dtype=np.int64)
        best_d2 = np.empty(0, dtype=np.float64)
        kth = np.inf
        heap: List[Tuple[float, int]] = [(self._lower_bound(0, x), 0)]
        while heap:
            bound, node = heapq.heappop(heap)
            if bound > kth:
                break
            if self._left[node] < 0:
                members = self._members(node)
                d2 = row_sq_distances(self.X[members], x)
                cand_idx = np.concatenate([best_idx, members])
                cand_d2 = np.concatenate([best_d2, d2])
                keep = np.lexsort((cand_idx, cand_d2))[:k]
                best_idx, best_d2 = cand_idx[keep], cand_d2[keep]
                if best_idx.shape[0] == k:
                    kth = float(np.sqrt(best_d2[-1]))
                continue
            for child in (self._left[node], self._right[node]):
                child_bound = self._lower_bound(child, x)
                if child_bound <= kth:
                    heapq.heappush(heap, (child_bound, child))
        return NeighborQueryResult(best_idx.astype(np.int64), np.sqrt(best_d2))

    def query_radius(self, x, r: float) -> NeighborQueryResult:
        """半径查询: 距离严格小于 r 的全部点"""
        x = self._check_query(x)
        if not r > 0:
            raise InvalidHyperparameterError(f"半径必须为正, 实际 {r}")

        if self.kind == IndexKind.BRUTE:
            candidates = [np.arange(self.n_samples)]
        else:
            candidates = []
            stack = [0]
            while stack:
                node = stack.pop()
                if self._lower_bound(node, x) >= r:
                    continue
                if self._left[node] < 0:
                    candidates.append(self._members(node))
                else:
                    stack.extend([self._left[node], self._right[node]])
        if not candidates:
            return NeighborQueryResult(np.empty(0, dtype=np.int64), np.empty(0))
        idx = np.concatenate(candidates)
        dist = np.sqrt(row_sq_distances(self.X[idx], x))
        inside = dist < r
        idx, dist = idx[inside], dist[inside]
        order = np.lexsort((idx, dist))
        return NeighborQueryResult(idx[order].astype(np.int64), dist[order])

    # ------------------------------------------------------------ 审计

    @property
    def n_nodes(self) -> int:
        return len(self._start)

    def iter_nodes(self) -> Iterator[IndexNode]:
        """遍历全部节点"""
        for node in range(self.n_nodes):
            yield IndexNode(
                node_id=node,
                members=self._members(node).copy(),
                is_leaf=self._left[node] < 0,
                split_dim=self._dim[node],
                threshold=self._threshold[node],
                left=self._left[node],
                right=self._right[node],
                lower=self._lower[node],
                upper=self._upper[node],
                center=self._center[node],
                radius=self._radius[node],
            )

    def leaves(self) -> List[np.ndarray]:
        return [node.members for node in self.iter_nodes() if node.is_leaf]


def build_index(X, kind: IndexKind = IndexKind.KDTREE, leaf_size: int = DEFAULT_LEAF_SIZE) -> NeighborIndex:
    """构建近邻索引"""
    X = as_matrix(X)
    if leaf_size < 1:
        raise InvalidHyperparameterError(f"leaf_size 必须 ≥ 1, 实际 {leaf_size}")
    return NeighborIndex(X, IndexKind(kind), int(leaf_size))


def query_knn(index: NeighborIndex, x, k: int) -> NeighborQueryResult:
    return index.query_knn(x, k)


def query_radius(index: NeighborIndex, x, r: float) -> NeighborQueryResult:
    return index.query_radius(x, r)


def knn_batch(index: NeighborIndex, Z: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """批量 k 近邻: 返回 (n_query, k) 的索引与距离"""
    results = [index.query_knn(z, k) for z in np.atleast_2d(Z)]
    return (
        np.vstack([r.indices for r in results]),
        np.vstack([r.distances for r in results]),
    )


def radius_batch(index: NeighborIndex, Z: np.ndarray, r: float) -> List[NeighborQueryResult]:
    return [index.query_radius(z, r) for z in np.atleast_2d(Z)]
