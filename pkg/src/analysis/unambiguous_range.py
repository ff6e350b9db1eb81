"""
最大不模糊距离分析
R_max = N_p·c / (2·N·Δf)
"""

import math
from dataclasses import dataclass
from typing import Union

from waveform.system_config import Scheme
from utils.errors import InvalidArgumentError

DEFAULT_SUBCARRIER_SPACING = 15e3   # Hz
DEFAULT_LIGHT_SPEED = 2.998e8       # m/s


@dataclass(frozen=True)
class RangeConfig:
    """距离计算参数"""
    n_fft: int
    n_pilot: int
    subcarrier_spacing: float = DEFAULT_SUBCARRIER_SPACING
    light_speed: float = DEFAULT_LIGHT_SPEED

    def __post_init__(self):
        if self.n_fft <= 0 or self.n_pilot <= 0:
            raise InvalidArgumentError(f"n_fft 与 n_pilot 必须为正: {self.n_fft}, {self.n_pilot}")
        if self.n_pilot > self.n_fft:
            raise InvalidArgumentError(f"n_pilot ({self.n_pilot}) 不能超过 n_fft ({self.n_fft})")
        if not (self.subcarrier_spacing > 0 and self.light_speed > 0):
            raise InvalidArgumentError("子载波间隔与光速必须为正")


@dataclass(frozen=True)
class RangeReport:
    scheme: Scheme
    num_tx: int
    n_pilot: int
    r_max_m: float

    @property
    def table_value_m(self) -> int:
        """按整米截断的表格值"""
        return math.floor(self.r_max_m)


def max_unambiguous_range(rc: RangeConfig) -> float:
    """最大不模糊距离（米）"""
    return rc.n_pilot * rc.light_speed / (2 * rc.n_fft * rc.subcarrier_spacing)


def pilot_count(scheme: Union[str, Scheme], n_fft: int, num_tx: int) -> int:
    """导频子载波数: PS-ISAC 为 N，CI-ISAC 为 N/U"""
    scheme = Scheme.parse(scheme)
    if num_tx < 1:
        raise InvalidArgumentError(f"发射机数必须 ≥ 1: {num_tx}")
    if scheme is Scheme.PS_ISAC:
        return n_fft
    if n_fft % num_tx:
        raise InvalidArgumentError(f"CI-ISAC 要求 N 能被 U 整除: N={n_fft}, U={num_tx}")
    return n_fft // num_tx


def max_transmitters(n_fft: int, n_cp: int) -> int:
    """PS-ISAC 在一个 IDFT 帧内可分离的最大发射机数 N / N_CP"""
    if n_cp <= 0:
        raise InvalidArgumentError(f"n_cp 必须为正: {n_cp}")
    return n_fft // n_cp


def range_report(scheme: Union[str, Scheme], num_tx: int, n_fft: int,
                 subcarrier_spacing: float = DEFAULT_SUBCARRIER_SPACING,
                 light_speed: float = DEFAULT_LIGHT_SPEED) -> RangeReport:
    """按方案与发射机数计算最大不模糊距离"""
    scheme = Scheme.parse(scheme)
    n_pilot = pilot_count(scheme, n_fft, num_tx)
    rc = RangeConfig(n_fft=n_fft, n_pilot=n_pilot,
                     subcarrier_spacing=subcarrier_spacing, light_speed=light_speed)
    return RangeReport(scheme=scheme, num_tx=num_tx, n_pilot=n_pilot,
                       r_max_m=max_unambiguous_range(rc))
