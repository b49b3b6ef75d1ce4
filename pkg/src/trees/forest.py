"""
随机森林与极端随机树

每棵树使用 rng_split(seed, n_trees) 派生的独立随机流, 先抽 bootstrap 样本 (若启用), 再用同一流做特征子集抽样。
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import Field

from src.core.base import HyperParameters, Predictor, Task, persistable
from src.core.data import Labels, as_matrix
from src.core.errors import ConfigurationError
from src.core.parallel import parallel_map
from src.core.rng import SeededRng, rng_split
from src.trees.tree import DecisionTree, Splitter, TreeConfig, grow_tree, prepare_targets

logger = logging.getLogger(__name__)


@persistable("voting")
class Voting(str, Enum):
    HARD = "hard"
    SOFT = "soft"


@persistable("forest_kind")
class ForestKind(str, Enum):
    RANDOM_FOREST = "random_forest"
    EXTRA_TREES = "extra_trees"


@persistable("forest_config")
class ForestConfig(HyperParameters):
    """森林超参数; bootstrap 为空时随机森林默认开启, 极端随机树默认关闭"""

    n_trees: int = Field(default=100, ge=1, description="树的数量")
    bootstrap: Optional[bool] = Field(default=None, description="是否有放回抽样 n 行")
    max_features: Optional[int] = Field(default=None, ge=1, description="每次分裂考察的特征数")
    voting: Voting = Field(default=Voting.SOFT, description="分类投票方式")
    tree: TreeConfig = Field(default_factory=TreeConfig, description="单棵树的超参数")
    seed: int = Field(default=0, ge=0, description="随机种子")


def default_max_features(p: int, task: Task) -> int:
    """分类取 √p, 回归取 p/3, 下限为 1"""
    k = int(np.sqrt(p)) if task == Task.CLASSIFY else p // 3
    return max(1, k)


def bootstrap_rows(n: int, rng: SeededRng) -> np.ndarray:
    """有放回抽取 n 个行号"""
    return rng.integers(n, size=n)


@persistable("forest")
@dataclass(frozen=True)
class ForestModel(Predictor):
    kind: ForestKind
    config: ForestConfig
    trees: Tuple[DecisionTree, ...]
    task: Task
    classes: Tuple[str, ...] = ()

    @property
    def n_features(self) -> int:
        return self.trees[0].n_features

    def predict_proba(self, X) -> np.ndarray:
        """各树叶节点类别比例的平均"""
        if self.task != Task.CLASSIFY:
            raise ConfigurationError("回归森林不支持概率输出")
        X = as_matrix(X)
        return np.mean([t.predict_proba(X) for t in self.trees], axis=0)

    def predict(self, X, voting: Optional[Voting] = None) -> np.ndarray:
        X = as_matrix(X)
        if self.task == Task.REGRESS:
            return np.mean([t.predict(X) for t in self.trees], axis=0)
        voting = Voting(voting) if voting is not None else self.config.voting
        if voting == Voting.SOFT:
            return np.argmax(self.predict_proba(X), axis=1).astype(np.int64)
        votes = np.stack([t.predict(X) for t in self.trees], axis=1)
        q = len(self.classes)
        counts = np.apply_along_axis(np.bincount, 1, votes, minlength=q)
        return np.argmax(counts, axis=1).astype(np.int64)


def _fit_ensemble(X, y: Union[Labels, np.ndarray], config: ForestConfig, kind: ForestKind) -> ForestModel:
    X = as_matrix(X)
    n, p = X.shape
    task, values, _, classes = prepare_targets(y, config.tree.criterion)
    if task == Task.CLASSIFY:
        y = Labels(values, classes)
    else:
        y = values
    if kind == ForestKind.EXTRA_TREES:
        bootstrap = bool(config.bootstrap)
        splitter = Splitter.RANDOM
    else:
        bootstrap = config.bootstrap is None or config.bootstrap
        splitter = Splitter.BEST
    max_features = config.max_features or default_max_features(p, task)
    seeds = rng_split(config.seed, config.n_trees)

    def fit_one(seed: int) -> DecisionTree:
        tree_config = config.tree.model_copy(update={"max_features": max_features, "splitter": splitter, "seed": seed})
        rng = SeededRng(seed)
        if not bootstrap:
            return grow_tree(X, y, tree_config, rng)
        rows = bootstrap_rows(n, rng)
        sample = y.subset(rows) if isinstance(y, Labels) else y[rows]
        return grow_tree(X[rows], sample, tree_config, rng)

    trees = tuple(parallel_map(fit_one, seeds))
    logger.info("%s: %d 棵树, bootstrap=%s, max_features=%d", kind.value, len(trees), bootstrap, max_features)
    return ForestModel(kind, config, trees, trees[0].task, trees[0].classes)


def fit_forest(X, y: Union[Labels, np.ndarray], config: Optional[ForestConfig] = None) -> ForestModel:
    return _fit_ensemble(X, y, config or ForestConfig(), ForestKind.RANDOM_FOREST)


def fit_extra_trees(X, y: Union[Labels, np.ndarray], config: Optional[ForestConfig] = None) -> ForestModel:
    """每个候选特征在节点取值范围内随机抽一个阈值, 取其中最好的"""
    return _fit_ensemble(X, y, config or ForestConfig(), ForestKind.EXTRA_TREES)


def forest_predict(forest: ForestModel, X, voting: Optional[Voting] = None) -> np.ndarray:
    return forest.predict(X, voting)
