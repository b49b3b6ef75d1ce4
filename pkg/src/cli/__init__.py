# 命令行模块
from src.cli.commands import ClassicMLCLI, build_parser, main
from src.cli.csv_io import load_csv, write_csv
from src.cli.model_file import ModelFile, decode, encode, load_model_file, save_model_file

__all__ = [
    "ClassicMLCLI",
    "ModelFile",
    "build_parser",
    "decode",
    "encode",
    "load_csv",
    "load_model_file",
    "main",
    "save_model_file",
    "write_csv",
]
