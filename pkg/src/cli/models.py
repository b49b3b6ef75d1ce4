"""
命令行可训练的模型表: 名称 -> 任务类型、超参数选项、训练函数
"""
from argparse import Namespace
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from src.clustering import gmm_fit_em, kmeans_fit
from src.core.data import Labels
from src.core.errors import ConfigurationError
from src.decomposition import lda_fit_transform, pca_fit
from src.gaussian_models import GaussianKind, fit_gaussian
from src.kernel_methods import KernelSpec, fit_kernel_ridge, kernel_pca_fit
from src.linear_models import fit_elastic_net, fit_lasso, fit_logistic, fit_ols, fit_ridge
from src.multiclass import BinaryLearnerSpec, ecoc_fit, fit_multinomial, ovo_fit, ovr_fit
from src.neighbors import KNeighborsConfig, fit_knn
from src.svm import fit_svc, fit_svr
from src.trees import Criterion, ForestConfig, TreeConfig, fit_extra_trees, fit_forest, fit_tree


class Role(str, Enum):
    CLASSIFY = "classify"
    REGRESS = "regress"
    EITHER = "either"  # 由 --regression 决定
    CLUSTER = "cluster"
    TRANSFORM = "transform"


@dataclass(frozen=True)
class ModelEntry:
    name: str
    role: Role
    flags: Tuple[str, ...]
    build: Callable[[np.ndarray, Any, Namespace], Any]
    needs_labels: bool = False


def _pick(args: Namespace, *names: str, **renamed: str) -> Dict[str, Any]:
    """收集命令行上给出的超参数; renamed 为 字段名=选项名"""
    picked = {name: getattr(args, name) for name in names if getattr(args, name, None) is not None}
    for field, option in renamed.items():
        value = getattr(args, option, None)
        if value is not None:
            picked[field] = value
    return picked


def _required(args: Namespace, name: str, model: str) -> Any:
    value = getattr(args, name, None)
    if value is None:
        raise ConfigurationError(f"模型 {model} 需要 --{name.replace('_', '-')}")
    return value


def _intercept(args: Namespace) -> bool:
    return not args.no_intercept


def _kernel(args: Namespace) -> KernelSpec:
    return KernelSpec(**_pick(args, "gamma", "c0", "degree", kind="kernel"))


def _require_binary(labels: Labels, model: str) -> None:
    if labels.q != 2:
        raise ConfigurationError(
            f"{model} 只支持二分类, 当前有 {labels.q} 个类别; 多分类请使用 ovr、ovo 或 ecoc (--base {model})"
        )


def _binary_spec(args: Namespace) -> BinaryLearnerSpec:
    fields = _pick(args, "penalty", "lam", "alpha", "max_iter", "C", "iterations", kind="base")
    return BinaryLearnerSpec(kernel=_kernel(args), **fields)


def _tree_config(args: Namespace, with_features: bool = True) -> TreeConfig:
    names = ["criterion", "max_depth", "min_samples_split", "min_samples_leaf", "max_leaf_nodes",
             "min_impurity_decrease"]
    if with_features:
        names += ["max_features", "splitter"]
    fields = _pick(args, *names)
    if "criterion" not in fields and args.regression:
        fields["criterion"] = Criterion.MSE
    return TreeConfig(seed=args.seed, **fields)


def _forest_config(args: Namespace) -> ForestConfig:
    return ForestConfig(
        tree=_tree_config(args, with_features=False),
        seed=args.seed,
        **_pick(args, "n_trees", "bootstrap", "max_features", "voting"),
    )


# ---------------------------------------------------------------- 训练函数

def _knn(X, y, args):
    return fit_knn(X, y, KNeighborsConfig(**_pick(args, "k", "radius", "weights", "index", "leaf_size")))


def _ols(X, y, args):
    return fit_ols(X, y, _intercept(args))


def _ridge(X, y, args):
    return fit_ridge(X, y, args.lam if args.lam is not None else 1.0, _intercept(args))


def _lasso(X, y, args):
    return fit_lasso(X, y, args.lam if args.lam is not None else 0.1, _intercept(args))


def _elastic_net(X, y, args):
    lam = args.lam if args.lam is not None else 0.1
    alpha = args.alpha if args.alpha is not None else 0.5
    return fit_elastic_net(X, y, lam, alpha, _intercept(args))


def _logistic(X, y, args):
    _require_binary(y, "logistic")
    spec = BinaryLearnerSpec(**_pick(args, "penalty", "lam", "alpha", "max_iter"))
    return fit_logistic(X, y, spec.penalty, spec.lam, spec.alpha, max_iter=spec.max_iter)


def _svc(X, y, args):
    _require_binary(y, "svc")
    return fit_svc(X, y, _kernel(args), **_pick(args, "C", "iterations"))


def _svr(X, y, args):
    return fit_svr(X, y, _kernel(args), **_pick(args, "C", "epsilon", "iterations"))


def _krr(X, y, args):
    return fit_kernel_ridge(X, y, _kernel(args), args.lam if args.lam is not None else 1.0)


def _multinomial(X, y, args):
    return fit_multinomial(X, y, **_pick(args, "lam", "max_iter"))


def _ovr(X, y, args):
    return ovr_fit(X, y, _binary_spec(args))


def _ovo(X, y, args):
    return ovo_fit(X, y, _binary_spec(args))


def _ecoc(X, y, args):
    return ecoc_fit(X, y, _binary_spec(args), n_tasks=_required(args, "tasks", "ecoc"), seed=args.seed)


def _gnb(X, y, args):
    kind = GaussianKind.NB_SHARED_VAR if args.variance == "shared" else GaussianKind.NB_PER_CLASS_VAR
    return fit_gaussian(X, y, kind)


def _lda(X, y, args):
    return fit_gaussian(X, y, GaussianKind.LDA)


def _qda(X, y, args):
    return fit_gaussian(X, y, GaussianKind.QDA)


def _tree(X, y, args):
    return fit_tree(X, y, _tree_config(args))


def _forest(X, y, args):
    return fit_forest(X, y, _forest_config(args))


def _extra_trees(X, y, args):
    return fit_extra_trees(X, y, _forest_config(args))


def _kmeans(X, y, args):
    return kmeans_fit(X, _required(args, "k", "kmeans"), seed=args.seed,
                      **_pick(args, "restarts", "max_iter", "accel"))


def _gmm(X, y, args):
    return gmm_fit_em(X, _required(args, "k", "gmm"), seed=args.seed, **_pick(args, "max_iter", "tol"))


def _pca(X, y, args):
    return pca_fit(X, _required(args, "components", "pca"))


def _lda_projection(X, y, args):
    return lda_fit_transform(X, y, _required(args, "components", "lda-proj"))[0]


def _kpca(X, y, args):
    return kernel_pca_fit(X, _kernel(args), _required(args, "components", "kpca"))


KERNEL_FLAGS = ("kernel", "gamma", "c0", "degree")
LOGISTIC_FLAGS = ("penalty", "lam", "alpha", "max_iter")
TREE_FLAGS = ("criterion", "max_depth", "min_samples_split", "min_samples_leaf", "max_leaf_nodes",
              "min_impurity_decrease")
BINARY_FLAGS = ("base",) + LOGISTIC_FLAGS + KERNEL_FLAGS + ("C", "iterations")

MODELS: Dict[str, ModelEntry] = {
    entry.name: entry
    for entry in (
        ModelEntry("knn", Role.EITHER, ("k", "radius", "weights", "index", "leaf_size"), _knn),
        ModelEntry("ols", Role.REGRESS, ("no_intercept",), _ols),
        ModelEntry("ridge", Role.REGRESS, ("lam", "no_intercept"), _ridge),
        ModelEntry("lasso", Role.REGRESS, ("lam", "no_intercept"), _lasso),
        ModelEntry("elasticnet", Role.REGRESS, ("lam", "alpha", "no_intercept"), _elastic_net),
        ModelEntry("logistic", Role.CLASSIFY, LOGISTIC_FLAGS, _logistic),
        ModelEntry("svc", Role.CLASSIFY, KERNEL_FLAGS + ("C", "iterations"), _svc),
        ModelEntry("svr", Role.REGRESS, KERNEL_FLAGS + ("C", "epsilon", "iterations"), _svr),
        ModelEntry("krr", Role.REGRESS, KERNEL_FLAGS + ("lam",), _krr),
        ModelEntry("multinomial", Role.CLASSIFY, ("lam", "max_iter"), _multinomial),
        ModelEntry("ovr", Role.CLASSIFY, BINARY_FLAGS, _ovr),
        ModelEntry("ovo", Role.CLASSIFY, BINARY_FLAGS, _ovo),
        ModelEntry("ecoc", Role.CLASSIFY, BINARY_FLAGS + ("tasks",), _ecoc),
        ModelEntry("gnb", Role.CLASSIFY, ("variance",), _gnb),
        ModelEntry("lda", Role.CLASSIFY, (), _lda),
        ModelEntry("qda", Role.CLASSIFY, (), _qda),
        ModelEntry("tree", Role.EITHER, TREE_FLAGS + ("max_features", "splitter"), _tree),
        ModelEntry("forest", Role.EITHER, TREE_FLAGS + ("n_trees", "bootstrap", "max_features", "voting"), _forest),
        ModelEntry("extratrees", Role.EITHER, TREE_FLAGS + ("n_trees", "bootstrap", "max_features", "voting"),
                   _extra_trees),
        ModelEntry("kmeans", Role.CLUSTER, ("k", "restarts", "max_iter", "accel"), _kmeans),
        ModelEntry("gmm", Role.CLUSTER, ("k", "max_iter", "tol"), _gmm),
        ModelEntry("pca", Role.TRANSFORM, ("components",), _pca),
        ModelEntry("lda-proj", Role.TRANSFORM, ("components",), _lda_projection, needs_labels=True),
        ModelEntry("kpca", Role.TRANSFORM, KERNEL_FLAGS + ("components",), _kpca),
    )
}


def get_entry(name: str) -> ModelEntry:
    try:
        return MODELS[name]
    except KeyError:
        raise ConfigurationError(f"未知模型: {name}, 可选: {', '.join(MODELS)}") from None


def resolve_task(entry: ModelEntry, regression: bool) -> str:
    """写入模型文件的任务类型"""
    if entry.role == Role.EITHER:
        return Role.REGRESS.value if regression else Role.CLASSIFY.value
    if regression and entry.role == Role.CLASSIFY:
        raise ConfigurationError(f"模型 {entry.name} 只能用于分类, 不能与 --regression 同用")
    return entry.role.value


def recorded_hyperparameters(entry: ModelEntry, args: Namespace) -> Dict[str, Any]:
    """命令行上实际给出的超参数, 连同种子一起写入模型文件"""
    values: Dict[str, Any] = {"seed": args.seed}
    for name in entry.flags:
        value: Optional[Any] = getattr(args, name, None)
        if value is None or value is False:
            continue
        values[name] = value.value if isinstance(value, Enum) else value
    return values
