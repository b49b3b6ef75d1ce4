# 配置模块: 环境变量配置与日志
