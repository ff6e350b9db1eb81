# 接收机信道估计模块
