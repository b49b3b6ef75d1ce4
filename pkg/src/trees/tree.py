"""
CART 决策树

节点以扁平数组保存 (feature = -1 表示叶节点), 路由规则: x[feature] ≤ threshold 走左子树。
未设 max_leaf_nodes 时深度优先生长, 设置后按不纯度下降量最佳优先生长。
"""
import heapq
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import List, Optional, Tuple, Union

import numpy as np
from pydantic import Field

from src.core.base import HyperParameters, Predictor, Task, persistable
from src.core.data import Labels, as_matrix, as_vector, check_n_features
from src.core.errors import ConfigurationError, DimensionError, InvalidHyperparameterError
from src.core.rng import SeededRng
from src.trees.criteria import Criterion, class_impurity, impurity, lower_median

logger = logging.getLogger(__name__)

# 不纯度下降量的并列容差
TIE_TOLERANCE = 1e-12

LEAF = -1
MAX_THRESHOLD_REDRAWS = 64


@persistable("splitter")
class Splitter(str, Enum):
    BEST = "best"  # 每个候选特征的所有中点
    RANDOM = "random"  # 每个候选特征随机抽一个阈值


@persistable("tree_config")
class TreeConfig(HyperParameters):
    """决策树超参数"""

    criterion: Criterion = Field(default=Criterion.GINI, description="不纯度准则")
    max_depth: Optional[int] = Field(default=None, ge=0, description="最大深度")
    min_samples_split: int = Field(default=2, ge=2, description="可分裂节点的最少样本数")
    min_samples_leaf: int = Field(default=1, ge=1, description="叶节点最少样本数")
    max_leaf_nodes: Optional[int] = Field(default=None, ge=1, description="最多叶节点数")
    max_features: Optional[int] = Field(default=None, ge=1, description="每次分裂考察的特征数")
    min_impurity_decrease: float = Field(default=0.0, ge=0, description="最小不纯度下降量")
    splitter: Splitter = Field(default=Splitter.BEST, description="阈值选取方式")
    seed: int = Field(default=0, ge=0, description="随机种子")


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    decrease: float


@dataclass(frozen=True)
class TreeNode:
    """单个节点的只读视图"""

    feature: int
    threshold: float
    left: int
    right: int
    value: np.ndarray
    n_samples: int
    impurity: float

    @property
    def is_leaf(self) -> bool:
        return self.feature == LEAF


@persistable("decision_tree")
@dataclass(frozen=True)
class DecisionTree(Predictor):
    """value 每行为叶节点输出: 分类为类别比例 (q 列), 回归为单列预测值"""

    task: Task
    config: TreeConfig
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_node_samples: np.ndarray
    node_impurity: np.ndarray
    n_features: int
    classes: Tuple[str, ...] = ()

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature == LEAF))

    @cached_property
    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        for i in range(self.n_nodes):
            if self.feature[i] != LEAF:
                depths[self.left[i]] = depths[self.right[i]] = depths[i] + 1
        return int(depths.max())

    def node(self, i: int) -> TreeNode:
        return TreeNode(int(self.feature[i]), float(self.threshold[i]), int(self.left[i]), int(self.right[i]),
                        self.value[i], int(self.n_node_samples[i]), float(self.node_impurity[i]))

    def apply(self, X) -> np.ndarray:
        """每个样本落入的叶节点编号"""
        X = as_matrix(X)
        check_n_features(X, self.n_features)
        nodes = np.zeros(X.shape[0], dtype=np.int64)
        active = np.flatnonzero(self.feature[nodes] != LEAF)
        while active.size:
            current = nodes[active]
            go_left = X[active, self.feature[current]] <= self.threshold[current]
            nodes[active] = np.where(go_left, self.left[current], self.right[current])
            active = active[self.feature[nodes[active]] != LEAF]
        return nodes

    def predict_proba(self, X) -> np.ndarray:
        if self.task != Task.CLASSIFY:
            raise ConfigurationError("回归树不支持概率输出")
        return self.value[self.apply(X)]

    def predict(self, X) -> np.ndarray:
        leaf_values = self.value[self.apply(X)]
        if self.task == Task.CLASSIFY:
            return np.argmax(leaf_values, axis=1).astype(np.int64)
        return leaf_values[:, 0]


def _node_output(criterion: Criterion, y: np.ndarray, n_classes: int) -> np.ndarray:
    if criterion == Criterion.MSE:
        return np.array([float(np.mean(y))])
    if criterion == Criterion.MAE:
        return np.array([lower_median(y)])
    return np.bincount(y, minlength=n_classes) / y.size


def _midpoints(xs: np.ndarray, i: np.ndarray) -> np.ndarray:
    """相邻不同值的中点; 相邻浮点数的中点舍入到右端时退回左端值"""
    mid = 0.5 * (xs[i] + xs[i + 1])
    return np.where(mid < xs[i + 1], mid, xs[i])


def random_threshold(rng: SeededRng, lo: float, hi: float) -> float:
    """开区间 (lo, hi) 内的均匀阈值; 取到端点时重抽, 区间内没有浮点数时退回中点"""
    for _ in range(MAX_THRESHOLD_REDRAWS):
        thr = float(rng.uniform(lo, hi))
        if lo < thr < hi:
            return thr
    return float(_midpoints(np.array([lo, hi]), np.array([0]))[0])


def _sorted_child_impurities(criterion: Criterion, ys: np.ndarray, n_classes: int) -> Tuple[np.ndarray, np.ndarray]:
    """按特征值排序后, 左子节点取前 i+1 个样本 (i = 0..n-2) 时左右子节点的不纯度"""
    n = ys.shape[0]
    if criterion.task == Task.CLASSIFY:
        cum = np.cumsum(np.eye(n_classes)[ys], axis=0)
        left = cum[:-1]
        right = cum[-1] - left
        return class_impurity(criterion, left), class_impurity(criterion, right)
    if criterion == Criterion.MSE:
        yc = ys - ys.mean()
        sizes = np.arange(1, n, dtype=np.float64)
        s = np.cumsum(yc)[:-1]
        s2 = np.cumsum(yc * yc)[:-1]
        imp_left = np.maximum(s2 / sizes - (s / sizes) ** 2, 0.0)
        rs, rs2 = s[-1] + yc[-1] - s, np.sum(yc * yc) - s2
        rsizes = n - sizes
        imp_right = np.maximum(rs2 / rsizes - (rs / rsizes) ** 2, 0.0)
        return imp_left, imp_right
    imp_left = np.array([impurity(criterion, ys[: i + 1]) for i in range(n - 1)])
    imp_right = np.array([impurity(criterion, ys[i + 1:]) for i in range(n - 1)])
    return imp_left, imp_right


def _candidate_features(p: int, config: TreeConfig, rng: Optional[SeededRng]) -> np.ndarray:
    k = config.max_features
    if k is None or k >= p:
        return np.arange(p)
    if rng is None:
        rng = SeededRng(config.seed)
    return np.sort(rng.choice(p, k))


def best_split(X, y, config: TreeConfig, rng: Optional[SeededRng] = None,
               n_classes: Optional[int] = None) -> Optional[Split]:
    """节点内的最佳 (特征, 阈值)

    最大化 parent − (n_L/n)·imp_L − (n_R/n)·imp_R; 下降量在容差内并列时取最小特征编号, 再取最小阈值。
    纯节点或没有满足 min_samples_leaf / min_impurity_decrease 的分裂时返回 None。
    """
    X = as_matrix(X)
    criterion = config.criterion
    if criterion.task == Task.CLASSIFY:
        y = np.asarray(y, dtype=np.int64)
        n_classes = n_classes if n_classes is not None else int(y.max()) + 1
    else:
        y = np.asarray(y, dtype=np.float64)
    n, p = X.shape
    if n < config.min_samples_split:
        return None
    parent = impurity(criterion, y, n_classes)
    if parent <= 0.0:
        return None

    msl = config.min_samples_leaf
    features, thresholds, decreases = [], [], []
    for f in _candidate_features(p, config, rng):
        column = X[:, f]
        if config.splitter == Splitter.RANDOM:
            lo, hi = float(column.min()), float(column.max())
            if lo == hi:
                continue
            thr = random_threshold(rng, lo, hi) if rng is not None else 0.5 * (lo + hi)
            mask = column <= thr
            n_left = int(mask.sum())
            if n_left < msl or n - n_left < msl:
                continue
            dec = (parent - n_left / n * impurity(criterion, y[mask], n_classes)
                   - (n - n_left) / n * impurity(criterion, y[~mask], n_classes))
            features.append(np.array([f]))
            thresholds.append(np.array([thr]))
            decreases.append(np.array([dec]))
            continue

        order = np.argsort(column, kind="stable")
        xs, ys = column[order], y[order]
        sizes = np.arange(1, n)
        valid = (xs[:-1] < xs[1:]) & (sizes >= msl) & (n - sizes >= msl)
        if not valid.any():
            continue
        imp_left, imp_right = _sorted_child_impurities(criterion, ys, n_classes)
        dec = parent - sizes / n * imp_left - (n - sizes) / n * imp_right
        idx = np.flatnonzero(valid)
        features.append(np.full(idx.size, f))
        thresholds.append(_midpoints(xs, idx))
        decreases.append(dec[idx])

    if not features:
        return None
    features = np.concatenate(features)
    thresholds = np.concatenate(thresholds)
    decreases = np.concatenate(decreases)
    top = decreases.max()
    # 不纯节点上下降量为 0 的分裂也接受: XOR 类数据第一层没有正的下降量
    if top + TIE_TOLERANCE < config.min_impurity_decrease:
        return None
    # 候选按 (特征, 阈值) 升序排列, 第一个达到最大值的即为结果
    chosen = int(np.flatnonzero(decreases >= top - TIE_TOLERANCE)[0])
    return Split(int(features[chosen]), float(thresholds[chosen]), float(decreases[chosen]))


def prepare_targets(y, criterion: Criterion) -> Tuple[Task, np.ndarray, int, Tuple[str, ...]]:
    if criterion.task == Task.CLASSIFY:
        if isinstance(y, Labels):
            return Task.CLASSIFY, y.values, y.q, y.names
        arr = np.asarray(y)
        if arr.dtype.kind not in "iu":
            raise ConfigurationError(f"分类准则 {criterion.value} 需要类别标签")
        q = int(arr.max()) + 1
        return Task.CLASSIFY, arr.astype(np.int64), q, tuple(str(k) for k in range(q))
    if isinstance(y, Labels):
        raise ConfigurationError(f"回归准则 {criterion.value} 需要数值目标")
    return Task.REGRESS, as_vector(y), 1, ()


class _Grower:
    """按配置生长一棵树, 节点以列表累积"""

    def __init__(self, X: np.ndarray, y: np.ndarray, n_classes: int, config: TreeConfig, rng: SeededRng):
        self.X, self.y, self.q, self.config, self.rng = X, y, n_classes, config, rng
        self.feature: List[int] = []
        self.threshold: List[float] = []
        self.left: List[int] = []
        self.right: List[int] = []
        self.value: List[np.ndarray] = []
        self.n_samples: List[int] = []
        self.impurity: List[float] = []

    def _new_node(self, rows: np.ndarray) -> int:
        y = self.y[rows]
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.value.append(_node_output(self.config.criterion, y, self.q))
        self.n_samples.append(int(rows.size))
        self.impurity.append(impurity(self.config.criterion, y, self.q))
        return len(self.feature) - 1

    def _find_split(self, rows: np.ndarray, depth: int) -> Optional[Split]:
        if self.config.max_depth is not None and depth >= self.config.max_depth:
            return None
        return best_split(self.X[rows], self.y[rows], self.config, self.rng, self.q)

    def _apply_split(self, node: int, rows: np.ndarray, split: Split) -> Tuple[Tuple[int, np.ndarray], ...]:
        mask = self.X[rows, split.feature] <= split.threshold
        left_rows, right_rows = rows[mask], rows[~mask]
        left, right = self._new_node(left_rows), self._new_node(right_rows)
        self.feature[node] = split.feature
        self.threshold[node] = split.threshold
        self.left[node], self.right[node] = left, right
        return (left, left_rows), (right, right_rows)

    def grow_depth_first(self) -> None:
        rows = np.arange(self.X.shape[0])
        stack = [(self._new_node(rows), rows, 0)]
        while stack:
            node, rows, depth = stack.pop()
            split = self._find_split(rows, depth)
            if split is None:
                continue
            (left, left_rows), (right, right_rows) = self._apply_split(node, rows, split)
            stack.append((right, right_rows, depth + 1))
            stack.append((left, left_rows, depth + 1))

    def grow_best_first(self, max_leaves: int) -> None:
        rows = np.arange(self.X.shape[0])
        root = self._new_node(rows)
        frontier = []

        def push(node: int, node_rows: np.ndarray, depth: int) -> None:
            split = self._find_split(node_rows, depth)
            if split is not None:
                heapq.heappush(frontier, (-split.decrease, node, node_rows, depth, split))

        push(root, rows, 0)
        leaves = 1
        while frontier and leaves < max_leaves:
            _, node, node_rows, depth, split = heapq.heappop(frontier)
            (left, left_rows), (right, right_rows) = self._apply_split(node, node_rows, split)
            leaves += 1
            push(left, left_rows, depth + 1)
            push(right, right_rows, depth + 1)

    def build(self, task: Task, n_features: int, classes: Tuple[str, ...]) -> DecisionTree:
        return DecisionTree(
            task=task,
            config=self.config,
            feature=np.asarray(self.feature, dtype=np.int64),
            threshold=np.asarray(self.threshold, dtype=np.float64),
            left=np.asarray(self.left, dtype=np.int64),
            right=np.asarray(self.right, dtype=np.int64),
            value=np.vstack(self.value),
            n_node_samples=np.asarray(self.n_samples, dtype=np.int64),
            node_impurity=np.asarray(self.impurity, dtype=np.float64),
            n_features=n_features,
            classes=classes,
        )


def grow_tree(X: np.ndarray, y: Union[Labels, np.ndarray], config: TreeConfig, rng: SeededRng) -> DecisionTree:
    """以给定随机流生长一棵树, 森林为每棵树传入独立的流"""
    task, values, q, classes = prepare_targets(y, config.criterion)
    if values.shape[0] != X.shape[0]:
        raise DimensionError(f"目标数 {values.shape[0]} 与样本数 {X.shape[0]} 不一致")
    if config.max_features is not None and config.max_features > X.shape[1]:
        raise InvalidHyperparameterError(f"max_features={config.max_features} 超过特征数 {X.shape[1]}")
    grower = _Grower(X, values, q, config, rng)
    if config.max_leaf_nodes is not None:
        grower.grow_best_first(config.max_leaf_nodes)
    else:
        grower.grow_depth_first()
    return grower.build(task, X.shape[1], classes)


def fit_tree(X, y: Union[Labels, np.ndarray], config: Optional[TreeConfig] = None) -> DecisionTree:
    config = config or TreeConfig()
    X = as_matrix(X)
    tree = grow_tree(X, y, config, SeededRng(config.seed))
    logger.info("决策树 (%s): %d 个节点, %d 个叶节点, 深度 %d",
                config.criterion.value, tree.n_nodes, tree.n_leaves, tree.depth)
    return tree


def predict_tree(tree: DecisionTree, X) -> np.ndarray:
    return tree.predict(X)


def tree_predict_proba(tree: DecisionTree, X) -> np.ndarray:
    return tree.predict_proba(X)
