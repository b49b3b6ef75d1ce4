"""
CSV 读写 - 首行为表头, 逗号分隔, UTF-8
"""
import csv
import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from src.config.settings import settings
from src.core.data import Dataset, as_vector, encode_labels
from src.core.errors import ConfigurationError, CsvParseError, DataError, EmptyDatasetError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _parse_cell(text: str, line: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CsvParseError(f"无法解析为数值: {text!r}", line, column) from None
    if not math.isfinite(value):
        raise CsvParseError(f"不允许非有限值: {text!r}", line, column)
    return value


def _open(path: PathLike):
    try:
        return open(path, "r", encoding="utf-8", newline="")
    except FileNotFoundError:
        raise DataError(f"CSV 文件不存在: {path}") from None


def _header(reader, path: PathLike) -> List[str]:
    try:
        return [h.strip() for h in next(reader)]
    except StopIteration:
        raise EmptyDatasetError(f"CSV 文件为空: {path}") from None


def read_header(path: PathLike) -> List[str]:
    with _open(path) as f:
        return _header(csv.reader(f), path)


def read_rows(path: PathLike) -> tuple:
    """返回 (表头, 数据行); 行长度与表头不一致时报告行号"""
    with _open(path) as f:
        reader = csv.reader(f)
        header = _header(reader, path)
        rows = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise CsvParseError(f"字段数 {len(row)} 与表头字段数 {len(header)} 不一致", reader.line_num)
            rows.append((reader.line_num, [cell.strip() for cell in row]))
    if not rows:
        raise EmptyDatasetError(f"CSV 文件没有数据行: {path}")
    return header, rows


def load_csv(path: PathLike, label_column: Optional[str] = None, regression: bool = False) -> Dataset:
    """非标签列按表头顺序作为特征; 标签列按 regression 解析为回归目标或类别"""
    header, rows = read_rows(path)
    if label_column is not None and label_column not in header:
        raise ConfigurationError(f"CSV 中没有标签列 '{label_column}', 可用列: {', '.join(header)}")
    label_at = header.index(label_column) if label_column is not None else None
    feature_at = [j for j in range(len(header)) if j != label_at]

    X = np.empty((len(rows), len(feature_at)))
    raw_labels: List[str] = []
    for i, (line, row) in enumerate(rows):
        for c, j in enumerate(feature_at):
            X[i, c] = _parse_cell(row[j], line, header[j])
        if label_at is not None:
            raw_labels.append(row[label_at])

    labels = targets = None
    if label_at is not None:
        if regression:
            targets = as_vector([_parse_cell(v, line, label_column) for (line, _), v in zip(rows, raw_labels)])
        else:
            labels = encode_labels(raw_labels)
    logger.info("读取 %s: %d 行, %d 个特征", path, X.shape[0], X.shape[1])
    return Dataset(X, tuple(header[j] for j in feature_at), labels, targets, label_column)


def format_number(value) -> str:
    return format(float(value), f".{settings.csv_significant_digits}g")


def write_csv(path: PathLike, header: Sequence[str], columns: Sequence[Sequence]) -> None:
    """按列写出; 浮点数保留固定有效数字, 其余按字符串写出"""
    n = len(columns[0]) if columns else 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for i in range(n):
            writer.writerow([_cell(col[i]) for col in columns])
    logger.info("写出 %s: %d 行, %d 列", path, n, len(header))


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format_number(value)
    return str(value)
