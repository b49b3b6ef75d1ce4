# 测试包
