# 核心模块: 数据模型、异常体系、随机数、距离与并行映射
