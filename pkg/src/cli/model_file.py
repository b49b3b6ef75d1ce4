"""
模型文件 - 带版本号的 JSON 文本

payload 由注册表标签重建:
    数据类       {"__type__": 标签, "fields": {...}}
    超参数       {"__config__": 标签, "data": {...}}
    枚举         {"__enum__": 标签, "value": ...}
    numpy 数组   {"__ndarray__": dtype, "shape": [...], "data": [...]}
浮点数按 repr 写出, 读回后与原值逐位相同。
"""
import dataclasses
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from src.config.settings import settings
from src.core.base import HyperParameters, registered_type
from src.core.errors import ConfigurationError, DataError, NumericError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


# ---------------------------------------------------------------- 标准化

class Standardization(BaseModel):
    """训练数据每个特征的均值与标准差 (标准差为 0 的特征记为 1)"""

    mean: List[float]
    scale: List[float]

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardization":
        std = X.std(axis=0)
        return cls(mean=X.mean(axis=0).tolist(), scale=np.where(std > 0, std, 1.0).tolist())

    def apply(self, X: np.ndarray) -> np.ndarray:
        return (X - np.asarray(self.mean)) / np.asarray(self.scale)


# ---------------------------------------------------------------- 文件结构

class ModelMetadata(BaseModel):
    task: str = Field(..., description="classify / regress / cluster / transform")
    seed: int
    n_features: int
    feature_names: List[str]
    label_name: Optional[str] = None
    standardize: Optional[Standardization] = None


class ModelFile(BaseModel):
    format_version: int
    model_kind: str
    hyperparameters: Dict[str, Any] = Field(default_factory=dict)
    payload: Dict[str, Any]
    labels: Optional[List[str]] = None
    metadata: ModelMetadata

    def model(self) -> Any:
        return decode(self.payload)

    def prepare(self, X: np.ndarray) -> np.ndarray:
        """预测/变换前应用训练时的标准化"""
        if self.metadata.standardize is None:
            return X
        return self.metadata.standardize.apply(X)


# ---------------------------------------------------------------- 编解码

def _tag(obj: Any) -> str:
    tag = getattr(type(obj), "__persist_tag__", None)
    if tag is None:
        raise ConfigurationError(f"类型 {type(obj).__name__} 未注册, 无法写入模型文件")
    return tag


def encode(obj: Any) -> Any:
    """把模型对象转换为 JSON 兼容结构"""
    if obj is None:
        return None
    if isinstance(obj, Enum):
        return {"__enum__": _tag(obj), "value": obj.value}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            raise NumericError(f"模型参数含非有限值 {obj}, 无法写入模型文件")
        return float(obj)
    if isinstance(obj, str):
        return obj
    if isinstance(obj, np.ndarray):
        if obj.dtype.kind not in "biuf":
            raise ConfigurationError(f"不支持的数组类型 {obj.dtype}")
        if obj.dtype.kind == "f" and not np.all(np.isfinite(obj)):
            raise NumericError("模型参数数组含非有限值, 无法写入模型文件")
        return {"__ndarray__": obj.dtype.str, "shape": list(obj.shape), "data": obj.ravel().tolist()}
    if isinstance(obj, HyperParameters):
        return {"__config__": _tag(obj), "data": obj.model_dump(mode="json")}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        fields = {
            f.name: encode(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if f.metadata.get("persist", True)
        }
        return {"__type__": _tag(obj), "fields": fields}
    if isinstance(obj, (list, tuple)):
        return [encode(item) for item in obj]
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    raise ConfigurationError(f"无法序列化类型 {type(obj).__name__}")


def decode(data: Any) -> Any:
    """encode 的逆变换; JSON 数组还原为元组"""
    if isinstance(data, list):
        return tuple(decode(item) for item in data)
    if not isinstance(data, dict):
        return data
    if "__enum__" in data:
        return registered_type(data["__enum__"])(data["value"])
    if "__ndarray__" in data:
        dtype = np.dtype(data["__ndarray__"])
        return np.array(data["data"], dtype=dtype).reshape(data["shape"])
    if "__config__" in data:
        return registered_type(data["__config__"])(**data["data"])
    if "__type__" in data:
        cls = registered_type(data["__type__"])
        return cls(**{name: decode(value) for name, value in data["fields"].items()})
    return {k: decode(v) for k, v in data.items()}


# ---------------------------------------------------------------- 读写

def dumps(model_file: ModelFile) -> str:
    """键排序、禁止 NaN, 相同输入得到相同文本"""
    return json.dumps(model_file.model_dump(), ensure_ascii=False, indent=2, sort_keys=True, allow_nan=False) + "\n"


def save_model_file(path: PathLike, model_file: ModelFile) -> None:
    Path(path).write_text(dumps(model_file), encoding="utf-8")
    logger.info("模型已保存: %s (%s)", path, model_file.model_kind)


def load_model_file(path: PathLike) -> ModelFile:
    """先核对版本号, 不识别的版本不做任何解析"""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DataError(f"模型文件不存在: {path}") from None
    except json.JSONDecodeError as exc:
        raise DataError(f"模型文件不是合法的 JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise DataError("模型文件顶层必须是对象")
    version = raw.get("format_version")
    if version != settings.model_format_version:
        raise DataError(f"不支持的模型文件版本 {version!r}, 当前版本 {settings.model_format_version}")
    try:
        return ModelFile.model_validate(raw)
    except ValidationError as exc:
        raise DataError(f"模型文件结构非法: {exc.error_count()} 处错误") from None
