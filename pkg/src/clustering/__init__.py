# 聚类模块
from src.clustering.gmm import GmmConfig, GmmModel, gmm_fit_em, gmm_predict, gmm_responsibilities
from src.clustering.kmeans import (
    Accel,
    KMeansConfig,
    KMeansModel,
    KMeansRun,
    inertia,
    kmeans_fit,
    kmeans_init_for,
    kmeans_pp_init,
    kmeans_predict,
    kmeans_single,
)

__all__ = [
    "Accel",
    "GmmConfig",
    "GmmModel",
    "KMeansConfig",
    "KMeansModel",
    "KMeansRun",
    "gmm_fit_em",
    "gmm_predict",
    "gmm_responsibilities",
    "inertia",
    "kmeans_fit",
    "kmeans_init_for",
    "kmeans_pp_init",
    "kmeans_predict",
    "kmeans_single",
]
