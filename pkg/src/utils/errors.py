"""
异常类型定义
仿真内核只抛出这里定义的异常，由命令行层统一捕获并记录日志
"""


class IsacSimulationError(Exception):
    """仿真工具所有异常的基类"""


class InvalidArgumentError(IsacSimulationError, ValueError):
    """参数不满足前置条件（长度、取值范围等）"""


class ConfigurationError(IsacSimulationError, ValueError):
    """系统配置违反不变量"""


class WindowOverlapError(ConfigurationError):
    """PS-ISAC 的 CIR 窗口超出一个 IDFT 帧 (U * N_CP > N)"""


class ContractViolationError(IsacSimulationError):
    """违反物理模型约束，例如信道抽头长度超过 CP 长度"""


class DivisionHazardError(IsacSimulationError, ArithmeticError):
    """LS 估计时已占用子载波上的导频为零"""
