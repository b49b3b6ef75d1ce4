# 多分类模块
from src.multiclass.base import BaseLearner, BinaryLearnerSpec
from src.multiclass.codebook import CodeBook, one_vs_rest_codebook, random_codebook
from src.multiclass.multinomial import (
    MultinomialModel,
    cross_entropy_gradient,
    cross_entropy_objective,
    fit_multinomial,
    softmax,
)
from src.multiclass.strategies import (
    EcocModel,
    OneVsOneModel,
    OneVsRestModel,
    ecoc_decide,
    ecoc_fit,
    ecoc_predict,
    ovo_decide,
    ovo_fit,
    ovo_predict,
    ovr_fit,
    ovr_predict,
)

__all__ = [
    "BaseLearner",
    "BinaryLearnerSpec",
    "CodeBook",
    "EcocModel",
    "MultinomialModel",
    "OneVsOneModel",
    "OneVsRestModel",
    "cross_entropy_gradient",
    "cross_entropy_objective",
    "ecoc_decide",
    "ecoc_fit",
    "ecoc_predict",
    "fit_multinomial",
    "one_vs_rest_codebook",
    "ovo_decide",
    "ovo_fit",
    "ovo_predict",
    "ovr_fit",
    "ovr_predict",
    "random_codebook",
    "softmax",
]
