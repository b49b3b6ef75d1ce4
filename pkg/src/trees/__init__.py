# 决策树与树集成模块
from src.trees.criteria import Criterion, impurity
from src.trees.forest import (
    ForestConfig,
    ForestKind,
    ForestModel,
    Voting,
    bootstrap_rows,
    default_max_features,
    fit_extra_trees,
    fit_forest,
    forest_predict,
)
from src.trees.tree import (
    DecisionTree,
    Split,
    Splitter,
    TreeConfig,
    TreeNode,
    best_split,
    fit_tree,
    predict_tree,
    tree_predict_proba,
)

__all__ = [
    "Criterion",
    "DecisionTree",
    "ForestConfig",
    "ForestKind",
    "ForestModel",
    "Split",
    "Splitter",
    "TreeConfig",
    "TreeNode",
    "Voting",
    "best_split",
    "bootstrap_rows",
    "default_max_features",
    "fit_extra_trees",
    "fit_forest",
    "fit_tree",
    "forest_predict",
    "impurity",
    "predict_tree",
    "tree_predict_proba",
]
