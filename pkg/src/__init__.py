# 上行 OFDMA-ISAC 导频分配仿真工具
