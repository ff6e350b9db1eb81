# 分析模块
