# 数值计算模块
