#!/usr/bin/env python3
"""
经典机器学习工具箱命令行
用法示例:
    python scripts/classicml.py fit --model kmeans --k 2 --in data.csv --out model.json
    python scripts/classicml.py inspect --model-file model.json
"""
import os
import sys

# 添加项目根目录到路径
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli.commands import main

if __name__ == "__main__":
    sys.exit(main())
