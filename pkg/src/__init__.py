# 经典机器学习工具箱源代码包
