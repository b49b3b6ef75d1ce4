"""
配置管理模块 - 支持环境变量和 .env 配置文件
"""
from typing import Optional
from pathlib import Path

from pydantic import Field, PositiveInt
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """应用配置"""

    model_config = SettingsConfigDict(
        env_prefix="CLASSICML_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # 应用基础配置
    app_name: str = "经典机器学习工具箱"
    app_version: str = "1.0.0"

    # 并行配置: 未设置时单线程
    threads: Optional[PositiveInt] = Field(default=None, description="工作线程上限")

    # 训练与输出配置
    default_seed: int = Field(default=0, description="默认随机种子")
    model_format_version: int = Field(default=1, description="模型文件格式版本")
    csv_significant_digits: int = Field(default=12, ge=1, le=17, description="CSV 输出有效数字")
    metric_decimals: int = Field(default=6, ge=0, le=12, description="评估指标小数位")

    # 日志配置
    log_level: str = Field(default="WARNING", description="日志级别")
    log_file: Optional[str] = Field(default=None, description="日志文件名")


# 全局配置实例
settings = Settings()

# 项目根目录
PROJECT_ROOT = Path(__file__).parent.parent.parent
LOGS_DIR = PROJECT_ROOT / "logs"
