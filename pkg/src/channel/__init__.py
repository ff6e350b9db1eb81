# 信道模块
