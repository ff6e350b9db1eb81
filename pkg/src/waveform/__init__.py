# 波形生成模块
