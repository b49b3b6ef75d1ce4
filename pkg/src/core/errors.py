"""
异常体系 - 所有模块共享

命令行根据 exit_code 映射退出码: 2 配置错误, 3 数据错误, 4 数值错误。
"""
from typing import Any, Optional


class ClassicMLError(Exception):
    """工具箱异常基类"""

    exit_code: int = 1


# ---------------------------------------------------------------- 配置类

class ConfigurationError(ClassicMLError):
    """配置错误"""

    exit_code = 2


class InvalidHyperparameterError(ConfigurationError):
    """超参数非法"""


# ---------------------------------------------------------------- 数据类

class DataError(ClassicMLError):
    """输入数据错误"""

    exit_code = 3


class DimensionError(DataError):
    """维度不匹配"""


class SymmetryError(DimensionError):
    """矩阵不对称"""


class EmptyDatasetError(DataError):
    """空数据集"""


class DegenerateLabelsError(DataError):
    """标签退化 (类别不足或样本不足)"""


class InsufficientSamplesError(DataError):
    """样本数不足"""


class EmptyNeighborhoodError(DataError):
    """邻域为空"""


class EmptyPartitionError(DataError):
    """节点为空"""


class CsvParseError(DataError):
    """CSV 解析错误, 携带行号和列名"""

    def __init__(self, message: str, line: int, column: Optional[str] = None):
        self.line = line
        self.column = column
        location = f"第 {line} 行" if column is None else f"第 {line} 行, 列 '{column}'"
        super().__init__(f"{location}: {message}")


# ---------------------------------------------------------------- 数值类

class NumericError(ClassicMLError):
    """数值计算错误"""

    exit_code = 4


class SingularMatrixError(NumericError):
    """矩阵奇异或非正定"""


class ConvergenceError(NumericError):
    """迭代未收敛, last_iterate 为最后一次迭代结果"""

    def __init__(self, message: str, last_iterate: Any = None):
        self.last_iterate = last_iterate
        super().__init__(message)


class DegenerateComponentError(NumericError):
    """混合成分权重塌缩"""

    def __init__(self, component: int):
        self.component = component
        super().__init__(f"混合成分 {component} 的权重塌缩 (π < 1e-12)")
