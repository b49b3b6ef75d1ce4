"""
命令行入口 - fit / predict / evaluate / transform / inspect

退出码: 0 成功, 2 配置错误, 3 数据错误, 4 数值错误, 1 未预期的错误。
"""
import argparse
import logging
import sys
from typing import List, Optional

import numpy as np

from src.cli.csv_io import load_csv, read_header, write_csv
from src.cli.model_file import (
    ModelFile,
    ModelMetadata,
    Standardization,
    encode,
    load_model_file,
    save_model_file,
)
from src.cli.models import MODELS, Role, get_entry, recorded_hyperparameters, resolve_task
from src.clustering import GmmModel, KMeansModel, inertia
from src.config.log import setup_logging
from src.config.settings import settings
from src.core.data import Dataset, Labels, check_n_features
from src.core.errors import ClassicMLError, ConfigurationError
from src.core.scoring import accuracy, mean_absolute_error, mean_squared_error
from src.decomposition import PcaModel, reconstruction_error

logger = logging.getLogger(__name__)


class ClassicMLCLI:
    """模型训练与使用的命令行工具"""

    # ---------------------------------------------------------------- 公共

    def _load(self, model_file: ModelFile, path: str, label: Optional[str] = None) -> Dataset:
        """读取输入; 训练时的标签列若存在则不作为特征"""
        label = label or model_file.metadata.label_name
        if label is not None and label not in read_header(path):
            label = None
        return load_csv(path, label, regression=model_file.metadata.task == Role.REGRESS.value)

    def _features(self, model_file: ModelFile, dataset: Dataset) -> np.ndarray:
        check_n_features(dataset.X, model_file.metadata.n_features)
        return model_file.prepare(dataset.X)

    def _print_metric(self, name: str, value: float) -> None:
        print(f"{name}={value:.{settings.metric_decimals}f}")

    # ---------------------------------------------------------------- 子命令

    def fit(self, args: argparse.Namespace) -> None:
        """训练模型并写出模型文件"""
        entry = get_entry(args.model)
        task = resolve_task(entry, args.regression)
        supervised = task in (Role.CLASSIFY.value, Role.REGRESS.value) or entry.needs_labels
        if supervised and args.label is None:
            raise ConfigurationError(f"模型 {entry.name} 需要 --label 指定标签列")

        dataset = load_csv(args.input, args.label, regression=task == Role.REGRESS.value)
        standardization = Standardization.fit(dataset.X) if args.standardize else None
        X = standardization.apply(dataset.X) if standardization else dataset.X
        if task == Role.REGRESS.value:
            y = dataset.targets
        elif supervised:
            y = dataset.labels
        else:
            y = None

        model = entry.build(X, y, args)
        model_file = ModelFile(
            format_version=settings.model_format_version,
            model_kind=entry.name,
            hyperparameters=recorded_hyperparameters(entry, args),
            payload=encode(model),
            labels=list(y.names) if isinstance(y, Labels) else None,
            metadata=ModelMetadata(
                task=task,
                seed=args.seed,
                n_features=dataset.n_features,
                feature_names=list(dataset.feature_names),
                label_name=args.label,
                standardize=standardization,
            ),
        )
        save_model_file(args.out, model_file)
        print(f"✅ 模型 {entry.name} 已保存到 {args.out}")

    def predict(self, args: argparse.Namespace) -> None:
        """逐行预测; 分类输出原始类名, --proba 追加各类概率"""
        model_file = load_model_file(args.model_file)
        task = model_file.metadata.task
        if task == Role.TRANSFORM.value:
            raise ConfigurationError(f"{model_file.model_kind} 是降维模型, 请使用 transform 子命令")
        model = model_file.model()
        X = self._features(model_file, self._load(model_file, args.input))

        predictions = model.predict(X)
        if task == Role.CLASSIFY.value:
            names = model_file.labels or []
            header, columns = ["prediction"], [[names[int(i)] for i in predictions]]
        elif task == Role.REGRESS.value:
            header, columns = ["prediction"], [np.asarray(predictions, dtype=np.float64)]
        else:
            header, columns = ["cluster"], [[int(i) for i in predictions]]

        if args.proba:
            if task == Role.CLASSIFY.value:
                P, names = model.predict_proba(X), model_file.labels or []
            elif isinstance(model, GmmModel):
                P, names = model.responsibilities(X), [str(j) for j in range(model.k)]
            else:
                raise ConfigurationError(f"{model_file.model_kind} 模型不提供概率输出")
            header += [f"proba_{name}" for name in names]
            columns += [P[:, j] for j in range(P.shape[1])]

        write_csv(args.out, header, columns)
        print(f"✅ 已写出 {len(predictions)} 行预测到 {args.out}")

    def evaluate(self, args: argparse.Namespace) -> None:
        """分类: accuracy; 回归: mse, mae; 聚类: inertia 或 log_likelihood; PCA: 重构误差"""
        model_file = load_model_file(args.model_file)
        task = model_file.metadata.task
        model = model_file.model()
        if task in (Role.CLASSIFY.value, Role.REGRESS.value):
            label = args.label or model_file.metadata.label_name
            if label is None:
                raise ConfigurationError("评估需要 --label 指定标签列")
            dataset = load_csv(args.input, label, regression=task == Role.REGRESS.value)
        else:
            dataset = self._load(model_file, args.input, args.label)
        X = self._features(model_file, dataset)

        if task == Role.CLASSIFY.value:
            names = model_file.labels or []
            predicted = np.array([names[int(i)] for i in model.predict(X)], dtype=object)
            self._print_metric("accuracy", accuracy(np.array(dataset.labels.decode(), dtype=object), predicted))
        elif task == Role.REGRESS.value:
            predicted = model.predict(X)
            self._print_metric("mse", mean_squared_error(dataset.targets, predicted))
            self._print_metric("mae", mean_absolute_error(dataset.targets, predicted))
        elif isinstance(model, KMeansModel):
            self._print_metric("inertia", inertia(X, model.centroids)[1])
        elif isinstance(model, GmmModel):
            self._print_metric("log_likelihood", model.score(X))
        elif isinstance(model, PcaModel):
            self._print_metric("reconstruction_error", reconstruction_error(model, X))
        else:
            raise ConfigurationError(f"{model_file.model_kind} 模型没有可用的评估指标")

    def transform(self, args: argparse.Namespace) -> None:
        """投影到 comp_1..comp_l; --label 把标签列原样附在最后"""
        model_file = load_model_file(args.model_file)
        if model_file.metadata.task != Role.TRANSFORM.value:
            raise ConfigurationError(f"{model_file.model_kind} 不是降维模型 (可用: pca, lda-proj, kpca)")
        model = model_file.model()
        dataset = self._load(model_file, args.input, args.label)
        Z = model.transform(self._features(model_file, dataset))

        header = [f"comp_{j + 1}" for j in range(Z.shape[1])]
        columns = [Z[:, j] for j in range(Z.shape[1])]
        if args.label is not None:
            if dataset.labels is None:
                raise ConfigurationError(f"输入文件中没有标签列 '{args.label}'")
            header.append(args.label)
            columns.append(dataset.labels.decode())
        if isinstance(model, PcaModel):
            logger.info("第一主成分方差占比: %.4f", float(model.explained_variance_ratio[0]))
        write_csv(args.out, header, columns)
        print(f"✅ 已写出 {Z.shape[0]}×{Z.shape[1]} 的投影到 {args.out}")

    def inspect(self, args: argparse.Namespace) -> None:
        """打印模型类型、超参数和标量参数"""
        model_file = load_model_file(args.model_file)
        meta = model_file.metadata
        print(f"📄 模型: {model_file.model_kind} (格式版本 {model_file.format_version})")
        print("-" * 60)
        print(f"task={meta.task}")
        print(f"n_features={meta.n_features}")
        print(f"standardize={'yes' if meta.standardize else 'no'}")
        if model_file.labels:
            print(f"labels={','.join(model_file.labels)}")
        for name, value in sorted(model_file.hyperparameters.items()):
            print(f"hyper.{name}={value}")
        for name, value in sorted(model_file.payload.get("fields", {}).items()):
            if isinstance(value, (bool, int, float, str)):
                print(f"{name}={value}")


# ---------------------------------------------------------------- 参数解析

def _add_hyperparameters(parser: argparse.ArgumentParser) -> None:
    """各模型的超参数选项, 未给出时为 None, 由模型取默认值"""
    group = parser.add_argument_group("超参数")
    group.add_argument("--k", type=int, help="近邻数 / 簇数 / 成分数")
    group.add_argument("--radius", type=float, help="近邻半径")
    group.add_argument("--weights", choices=["uniform", "inverse"], help="近邻加权")
    group.add_argument("--index", choices=["brute", "kdtree", "balltree"], help="近邻索引")
    group.add_argument("--leaf-size", dest="leaf_size", type=int, help="索引叶子容量")
    group.add_argument("--lam", type=float, help="惩罚强度 λ")
    group.add_argument("--alpha", type=float, help="弹性网 ℓ1 占比")
    group.add_argument("--penalty", choices=["none", "l2", "l1", "elastic_net"], help="逻辑回归惩罚")
    group.add_argument("--no-intercept", dest="no_intercept", action="store_true", default=None, help="不拟合截距")
    group.add_argument("--max-iter", dest="max_iter", type=int, help="最大迭代次数")
    group.add_argument("--tol", type=float, help="收敛阈值")
    group.add_argument("--kernel", choices=["linear", "polynomial", "sigmoid", "rbf"], help="核函数")
    group.add_argument("--gamma", type=float, help="核尺度 γ")
    group.add_argument("--c0", type=float, help="核常数项")
    group.add_argument("--degree", type=int, help="多项式核次数")
    group.add_argument("--C", dest="C", type=float, help="SVM 正则参数")
    group.add_argument("--epsilon", type=float, help="SVR 不敏感带宽")
    group.add_argument("--iterations", type=int, help="SVM 迭代次数")
    group.add_argument("--base", choices=["logistic", "svc"], help="多分类元策略的基学习器")
    group.add_argument("--tasks", type=int, help="纠错输出码的二分类任务数")
    group.add_argument("--variance", choices=["per_class", "shared"], help="朴素贝叶斯方差")
    group.add_argument("--criterion", choices=["gini", "entropy", "misclassification", "mse", "mae"], help="分裂准则")
    group.add_argument("--max-depth", dest="max_depth", type=int, help="最大深度")
    group.add_argument("--min-samples-split", dest="min_samples_split", type=int, help="可分裂的最少样本数")
    group.add_argument("--min-samples-leaf", dest="min_samples_leaf", type=int, help="叶节点最少样本数")
    group.add_argument("--max-leaf-nodes", dest="max_leaf_nodes", type=int, help="最多叶节点数")
    group.add_argument("--max-features", dest="max_features", type=int, help="每次分裂考察的特征数")
    group.add_argument("--min-impurity-decrease", dest="min_impurity_decrease", type=float, help="最小不纯度下降")
    group.add_argument("--splitter", choices=["best", "random"], help="阈值选取方式")
    group.add_argument("--n-trees", dest="n_trees", type=int, help="树的数量")
    group.add_argument("--bootstrap", action=argparse.BooleanOptionalAction, default=None, help="有放回抽样")
    group.add_argument("--voting", choices=["soft", "hard"], help="森林投票方式")
    group.add_argument("--restarts", type=int, help="k-means 重启次数")
    group.add_argument("--accel", choices=["lloyd", "elkan"], help="k-means 分配步骤")
    group.add_argument("--components", type=int, help="降维维数 l")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="classicml", description=f"{settings.app_name} v{settings.app_version}")
    parser.add_argument("--log-level", dest="log_level", help="日志级别 (默认取 CLASSICML_LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", help="可用命令")

    fit_parser = subparsers.add_parser("fit", help="训练模型")
    fit_parser.add_argument("--model", required=True, choices=list(MODELS), help="模型类型")
    fit_parser.add_argument("--in", dest="input", required=True, help="训练数据 CSV")
    fit_parser.add_argument("--label", help="标签列名")
    fit_parser.add_argument("--out", required=True, help="模型文件路径")
    fit_parser.add_argument("--seed", type=int, default=settings.default_seed, help="随机种子")
    fit_parser.add_argument("--standardize", action="store_true", help="按训练数据标准化特征")
    fit_parser.add_argument("--regression", action="store_true", help="标签列为数值回归目标")
    _add_hyperparameters(fit_parser)

    predict_parser = subparsers.add_parser("predict", help="预测")
    predict_parser.add_argument("--model-file", dest="model_file", required=True, help="模型文件")
    predict_parser.add_argument("--in", dest="input", required=True, help="输入 CSV")
    predict_parser.add_argument("--out", required=True, help="预测结果 CSV")
    predict_parser.add_argument("--proba", action="store_true", help="输出各类概率")

    evaluate_parser = subparsers.add_parser("evaluate", help="评估")
    evaluate_parser.add_argument("--model-file", dest="model_file", required=True, help="模型文件")
    evaluate_parser.add_argument("--in", dest="input", required=True, help="带标签的 CSV")
    evaluate_parser.add_argument("--label", help="标签列名 (默认与训练时相同)")

    transform_parser = subparsers.add_parser("transform", help="降维投影")
    transform_parser.add_argument("--model-file", dest="model_file", required=True, help="模型文件")
    transform_parser.add_argument("--in", dest="input", required=True, help="输入 CSV")
    transform_parser.add_argument("--out", required=True, help="投影结果 CSV")
    transform_parser.add_argument("--label", help="原样附加到输出的标签列")

    inspect_parser = subparsers.add_parser("inspect", help="查看模型文件")
    inspect_parser.add_argument("--model-file", dest="model_file", required=True, help="模型文件")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """解析参数并执行子命令, 返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return 0

    setup_logging(args.log_level)
    cli = ClassicMLCLI()
    try:
        getattr(cli, args.command)(args)
    except ClassicMLError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:
        logger.exception("未预期的错误")
        print(f"❌ 执行命令失败: {exc}", file=sys.stderr)
        return 1
    return 0
