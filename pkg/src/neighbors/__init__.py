# 近邻模块
from src.neighbors.index import (
    DEFAULT_LEAF_SIZE,
    IndexKind,
    NeighborIndex,
    NeighborQueryResult,
    build_index,
    knn_batch,
    query_knn,
    query_radius,
    radius_batch,
)
from src.neighbors.predictors import (
    KNeighborsConfig,
    KNeighborsModel,
    fit_knn,
    knn_predict_classification,
    knn_predict_regression,
    radius_predict_classification,
    radius_predict_regression,
)
from src.neighbors.weights import WeightScheme, neighbor_weights

__all__ = [
    "DEFAULT_LEAF_SIZE",
    "IndexKind",
    "KNeighborsConfig",
    "KNeighborsModel",
    "NeighborIndex",
    "NeighborQueryResult",
    "WeightScheme",
    "build_index",
    "fit_knn",
    "knn_batch",
    "knn_predict_classification",
    "knn_predict_regression",
    "neighbor_weights",
    "query_knn",
    "query_radius",
    "radius_batch",
    "radius_predict_classification",
    "radius_predict_regression",
]
