"""
计算复杂度分析
按 FFT 的实数加法 (3N·log₂N − 3N + 4) 与实数乘法 (N·log₂N − 3N + 4) 计数，
统计一个 OFDM 符号内发射端与接收端的实数运算量
"""

from dataclasses import dataclass, asdict
from typing import Dict, Union

from numerics.transforms import is_power_of_two
from waveform.system_config import Scheme
from utils.errors import InvalidArgumentError


@dataclass(frozen=True)
class ComplexityReport:
    """实数运算次数（精确整数）"""
    scheme: Scheme
    num_tx: int
    n_fft: int
    tx_additions: int
    tx_multiplications: int
    rx_additions: int
    rx_multiplications: int

    def to_dict(self) -> Dict[str, Union[str, int]]:
        record = asdict(self)
        record['scheme'] = self.scheme.label
        return record


def fft_additions(n: int) -> int:
    log2n = n.bit_length() - 1
    return 3 * n * log2n - 3 * n + 4


def fft_multiplications(n: int) -> int:
    log2n = n.bit_length() - 1
    return n * log2n - 3 * n + 4


def complexity(scheme: Union[str, Scheme], u: int, n: int) -> ComplexityReport:
    """
    计算方案的复杂度

    发射端每个发射机一次 IFFT，PS-ISAC 额外 2N 次相移乘法；
    接收端一次 FFT 得到 y_F、2N 次 LS 乘法、每个发射机一次 FFT，
    CI-ISAC 每个发射机还需一次 IFFT，PS-ISAC 只需一次联合 IFFT。

    Args:
        scheme: 导频方案
        u: 发射机数 U
        n: FFT 点数 N（2 的幂）

    Returns:
        ComplexityReport
    """
    scheme = Scheme.parse(scheme)
    if int(u) < 1:
        raise InvalidArgumentError(f"发射机数必须 ≥ 1: {u}")
    if not is_power_of_two(n) or n < 2:
        raise InvalidArgumentError(f"n 必须是 ≥ 2 的 2 的幂: {n}")
    u, n = int(u), int(n)
    adds = fft_additions(n)
    mults = fft_multiplications(n)

    if scheme is Scheme.CI_ISAC:
        tx_mult = u * mults
        rx_blocks = 2 * u + 1
    else:
        tx_mult = u * (mults + 2 * n)
        rx_blocks = u + 2

    return ComplexityReport(
        scheme=scheme,
        num_tx=u,
        n_fft=n,
        tx_additions=u * adds,
        tx_multiplications=tx_mult,
        rx_additions=rx_blocks * adds,
        rx_multiplications=rx_blocks * mults + 2 * n,
    )


def main():
    """测试函数"""
    for scheme in Scheme:
        for u in (4, 8, 16):
            print(complexity(scheme, u, 256).to_dict())


if __name__ == "__main__":
    main()
