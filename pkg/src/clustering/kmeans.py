"""
k-means: k-means++ 初始化、Lloyd 迭代、Elkan 三角不等式加速、多次重启

Lloyd 与 Elkan 共用质心更新与空簇修复, 只在分配步骤不同。Elkan 只在边界
严格排除某个质心时跳过它, 其余距离与 Lloyd 逐位相同, 因此两者从同一初始
质心出发得到相同的分配与质心。
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np
from pydantic import Field

from src.core.base import Clusterer, HyperParameters, persistable
from src.core.data import as_matrix, check_n_features
from src.core.distance import paired_sq_distances, row_sq_distances, squared_distances
from src.core.errors import InvalidHyperparameterError
from src.core.parallel import parallel_map
from src.core.rng import SeededRng, rng_split

logger = logging.getLogger(__name__)

# Elkan 剪枝余量 (相对上界, 另加按数据尺度的绝对项)
BOUND_SLACK = 1e-9


@persistable("kmeans_accel")
class Accel(str, Enum):
    LLOYD = "lloyd"
    ELKAN = "elkan"


@persistable("kmeans_config")
class KMeansConfig(HyperParameters):
    k: int = Field(..., ge=1, description="簇数")
    restarts: int = Field(default=10, ge=1, description="重启次数")
    max_iter: int = Field(default=300, ge=1, description="单次运行最大迭代次数")
    accel: Accel = Field(default=Accel.LLOYD, description="分配步骤实现")
    seed: int = Field(default=0, ge=0, description="随机种子")


@persistable("kmeans")
@dataclass(frozen=True)
class KMeansModel(Clusterer):
    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    iterations: int
    best_restart: int
    config: KMeansConfig
    restart_inertias: Tuple[float, ...] = ()
    inertia_path: Tuple[float, ...] = field(default=(), compare=False, metadata={"persist": False})

    @property
    def k(self) -> int:
        return int(self.centroids.shape[0])

    def predict(self, X) -> np.ndarray:
        """最近质心"""
        X = as_matrix(X)
        check_n_features(X, self.centroids.shape[1])
        return inertia(X, self.centroids)[0]


@dataclass(frozen=True)
class KMeansRun:
    """从给定初始质心出发的一次运行"""

    centroids: np.ndarray
    assignments: np.ndarray
    inertia: float
    iterations: int
    inertia_path: Tuple[float, ...]


def inertia(X, centroids) -> Tuple[np.ndarray, float]:
    """最近质心分配 (并列取最小编号) 与簇内平方和"""
    X = as_matrix(X)
    centroids = as_matrix(centroids, name="centroids")
    D = squared_distances(X, centroids)
    assignments = np.argmin(D, axis=1).astype(np.int64)
    return assignments, float(D[np.arange(X.shape[0]), assignments].sum())


def _assigned_inertia(X: np.ndarray, centroids: np.ndarray, assignments: np.ndarray) -> float:
    return float(paired_sq_distances(X, centroids[assignments]).sum())


def kmeans_pp_init(X, k: int, rng: SeededRng) -> np.ndarray:
    """k-means++: 首个质心均匀抽取, 之后按到最近已选质心的平方距离加权抽取"""
    X = as_matrix(X)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise InvalidHyperparameterError(f"簇数 k={k} 必须在 1..{n} 之间")
    chosen = [rng.integers(n)]
    nearest = row_sq_distances(X, X[chosen[0]])
    for _ in range(1, k):
        if nearest.sum() > 0:
            idx = rng.weighted_index(nearest)
        else:
            # 剩余样本都与已选质心重合
            rest = np.setdiff1d(np.arange(n), chosen)
            idx = int(rest[rng.integers(rest.size)])
        chosen.append(idx)
        nearest = np.minimum(nearest, row_sq_distances(X, X[idx]))
    return X[chosen].copy()


def _update_centroids(X: np.ndarray, assignments: np.ndarray, k: int) -> np.ndarray:
    """簇均值; 空簇取簇内平方和最大的簇中离质心最远的样本"""
    counts = np.bincount(assignments, minlength=k)
    sums = np.zeros((k, X.shape[1]))
    np.add.at(sums, assignments, X)
    centroids = np.zeros_like(sums)
    filled = counts > 0
    centroids[filled] = sums[filled] / counts[filled, None]

    empty = np.flatnonzero(~filled)
    if empty.size:
        owner = assignments.copy()
        for j in empty:
            dist = paired_sq_distances(X, centroids[owner])
            per_cluster = np.bincount(owner, weights=dist, minlength=k)
            h = int(np.argmax(per_cluster))
            members = np.flatnonzero(owner == h)
            far = int(members[np.argmax(dist[members])])
            centroids[j] = X[far]
            owner[far] = j
            logger.debug("空簇 %d 由簇 %d 中的样本 %d 修复", j, h, far)
    return centroids


class _LloydAssigner:
    def __init__(self, X: np.ndarray):
        self.X = X

    def start(self, centroids: np.ndarray) -> np.ndarray:
        return inertia(self.X, centroids)[0]

    def step(self, old: np.ndarray, new: np.ndarray, assignments: np.ndarray) -> np.ndarray:
        return inertia(self.X, new)[0]


class _ElkanAssigner:
    """维护每个样本到所属质心距离的上界与到各质心距离的下界"""

    def __init__(self, X: np.ndarray):
        self.X = X
        self.slack = BOUND_SLACK * (1.0 + float(np.abs(X).max()))

    def start(self, centroids: np.ndarray) -> np.ndarray:
        sq = squared_distances(self.X, centroids)
        assignments = np.argmin(sq, axis=1).astype(np.int64)
        self.lower = np.sqrt(sq)
        self.upper = self.lower[np.arange(self.X.shape[0]), assignments]
        return assignments

    def step(self, old: np.ndarray, new: np.ndarray, assignments: np.ndarray) -> np.ndarray:
        X, k = self.X, new.shape[0]
        shift = np.sqrt(paired_sq_distances(old, new))
        self.upper = self.upper + shift[assignments]
        self.lower = np.maximum(self.lower - shift[None, :], 0.0)
        half = 0.5 * np.sqrt(squared_distances(new, new))

        def survivors(rows: np.ndarray) -> np.ndarray:
            limit = (self.upper[rows] * (1.0 + BOUND_SLACK) + self.slack)[:, None]
            keep = (self.lower[rows] <= limit) & (half[assignments[rows]] <= limit)
            keep[np.arange(rows.size), assignments[rows]] = False
            return keep

        rows = np.flatnonzero(survivors(np.arange(X.shape[0])).any(axis=1))
        if rows.size == 0:
            return assignments

        # 收紧上界后再筛一次
        own = assignments[rows]
        sq_own = paired_sq_distances(X[rows], new[own])
        self.upper[rows] = np.sqrt(sq_own)
        self.lower[rows, own] = self.upper[rows]
        keep = survivors(rows)
        ri, ci = np.nonzero(keep)
        sq = paired_sq_distances(X[rows[ri]], new[ci])
        self.lower[rows[ri], ci] = np.sqrt(sq)

        table = np.full((rows.size, k), np.inf)
        table[np.arange(rows.size), own] = sq_own
        table[ri, ci] = sq
        best = np.argmin(table, axis=1)
        updated = assignments.copy()
        updated[rows] = best
        self.upper[rows] = np.sqrt(table[np.arange(rows.size), best])
        return updated


def kmeans_single(X, init, max_iter: int = 300, accel: Accel = Accel.LLOYD) -> KMeansRun:
    """从给定质心出发交替分配与更新, 直到分配不变或达到 max_iter"""
    X = as_matrix(X)
    centroids = as_matrix(init, name="init").copy()
    check_n_features(X, centroids.shape[1])
    k = centroids.shape[0]
    assigner = _ElkanAssigner(X) if Accel(accel) == Accel.ELKAN else _LloydAssigner(X)

    assignments = assigner.start(centroids)
    path = [_assigned_inertia(X, centroids, assignments)]
    iterations = 0
    for iterations in range(1, max_iter + 1):
        updated = _update_centroids(X, assignments, k)
        new_assignments = assigner.step(centroids, updated, assignments)
        centroids = updated
        path.append(_assigned_inertia(X, centroids, new_assignments))
        logger.debug("k-means 第 %d 次迭代, 簇内平方和 %.6g", iterations, path[-1])
        converged = np.array_equal(new_assignments, assignments)
        assignments = new_assignments
        if converged:
            break
    return KMeansRun(centroids, assignments, path[-1], iterations, tuple(path))


def kmeans_fit(X, k: int, restarts: int = 10, max_iter: int = 300, accel: Accel = Accel.LLOYD,
               seed: int = 0) -> KMeansModel:
    """多次重启取簇内平方和最小的一次, 并列取最早的重启"""
    config = KMeansConfig(k=k, restarts=restarts, max_iter=max_iter, accel=accel, seed=seed)
    X = as_matrix(X)
    if config.k > X.shape[0]:
        raise InvalidHyperparameterError(f"簇数 k={config.k} 超过样本数 {X.shape[0]}")

    def run(restart_seed: int) -> KMeansRun:
        init = kmeans_pp_init(X, config.k, SeededRng(restart_seed))
        return kmeans_single(X, init, config.max_iter, config.accel)

    runs = parallel_map(run, rng_split(config.seed, config.restarts))
    best = min(range(len(runs)), key=lambda r: (runs[r].inertia, r))
    chosen = runs[best]
    logger.info("k-means (k=%d, %s): 最优为第 %d 次重启, 簇内平方和 %.6g, 迭代 %d 次",
                config.k, config.accel.value, best, chosen.inertia, chosen.iterations)
    return KMeansModel(
        centroids=chosen.centroids,
        assignments=chosen.assignments,
        inertia=chosen.inertia,
        iterations=chosen.iterations,
        best_restart=best,
        config=config,
        restart_inertias=tuple(r.inertia for r in runs),
        inertia_path=chosen.inertia_path,
    )


def kmeans_predict(model: KMeansModel, X) -> np.ndarray:
    return model.predict(X)


def kmeans_init_for(X, k: int, seed: int, restart: int = 0) -> np.ndarray:
    """重现 kmeans_fit 第 restart 次重启的初始质心"""
    return kmeans_pp_init(X, k, SeededRng(rng_split(seed, restart + 1)[restart]))
