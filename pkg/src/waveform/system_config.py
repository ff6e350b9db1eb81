"""
系统配置
描述一次仿真场景的全部参数，构造时即校验不变量
"""

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from numerics.transforms import is_power_of_two
from utils.errors import ConfigurationError, WindowOverlapError


class Scheme(str, Enum):
    """导频分配方案"""
    PS_ISAC = "ps_isac"
    CI_ISAC = "ci_isac"

    @property
    def label(self) -> str:
        return "PS-ISAC" if self is Scheme.PS_ISAC else "CI-ISAC"

    @classmethod
    def parse(cls, value: Union[str, "Scheme"]) -> "Scheme":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ConfigurationError(f"未知的导频方案: {value}") from None


class PowerMode(str, Enum):
    """导频功率模式：受限时每个导频子载波单位功率，不受限时按 √(1/PR) 放大"""
    CONSTRAINED = "constrained"
    UNCONSTRAINED = "unconstrained"

    @classmethod
    def parse(cls, value: Union[str, "PowerMode"]) -> "PowerMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ConfigurationError(f"未知的功率模式: {value}") from None


def parse_ratio(value: Union[str, int, float, Fraction]) -> Fraction:
    """把 "1/8"、0.125 等写法解析为分数"""
    try:
        if isinstance(value, float):
            return Fraction(value).limit_denominator(1 << 20)
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigurationError(f"无法解析导频比例: {value}") from None


@dataclass(frozen=True)
class SystemConfig:
    """仿真场景参数（N, N_CP, U, PR, 方案, 功率模式, σ², 抽头数, 种子）"""
    n_fft: int
    n_cp: int
    num_tx: int
    pilot_ratio: Fraction
    scheme: Scheme
    power_mode: PowerMode = PowerMode.CONSTRAINED
    noise_variance: float = 0.0
    num_taps: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'pilot_ratio', parse_ratio(self.pilot_ratio))
        object.__setattr__(self, 'scheme', Scheme.parse(self.scheme))
        object.__setattr__(self, 'power_mode', PowerMode.parse(self.power_mode))
        self.validate()

    def validate(self):
        """校验不变量，违反时抛出 ConfigurationError 并说明违反的是哪一条"""
        if not is_power_of_two(self.n_fft) or self.n_fft < 2:
            raise ConfigurationError(f"n_fft 必须是 2 的幂: n_fft={self.n_fft}")
        if not 0 < self.n_cp < self.n_fft:
            raise ConfigurationError(f"需要 0 < n_cp < n_fft: n_cp={self.n_cp}, n_fft={self.n_fft}")
        if self.num_tx < 1:
            raise ConfigurationError(f"num_tx 必须为正: num_tx={self.num_tx}")
        if not 1 <= self.num_taps <= self.n_cp:
            raise ConfigurationError(
                f"需要 1 ≤ num_taps ≤ n_cp: num_taps={self.num_taps}, n_cp={self.n_cp}")
        if not 0 < self.pilot_ratio <= 1:
            raise ConfigurationError(f"pilot_ratio 必须在 (0, 1] 内: {self.pilot_ratio}")
        if not self.noise_variance >= 0:
            raise ConfigurationError(f"noise_variance 必须非负: {self.noise_variance}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f"seed 必须是 64 位无符号整数: {self.seed}")

        if self.scheme is Scheme.PS_ISAC:
            if self.num_tx * self.n_cp > self.n_fft:
                raise WindowOverlapError(
                    f"PS-ISAC 要求 U·n_cp ≤ n_fft: {self.num_tx}·{self.n_cp} > {self.n_fft}")
            if self.pilot_ratio != 1:
                raise ConfigurationError(f"PS-ISAC 要求 pilot_ratio = 1: {self.pilot_ratio}")
        else:
            if self.pilot_ratio != Fraction(1, self.num_tx):
                raise ConfigurationError(
                    f"CI-ISAC 要求 pilot_ratio = 1/U: pilot_ratio={self.pilot_ratio}, U={self.num_tx}")
            pilots = self.n_fft * self.pilot_ratio
            if pilots.denominator != 1:
                raise ConfigurationError(f"CI-ISAC 要求 n_fft·pilot_ratio 为整数: {pilots}")
            if self.num_taps > pilots:
                raise ConfigurationError(
                    f"CI-ISAC 要求 num_taps ≤ n_fft·pilot_ratio: {self.num_taps} > {pilots}")

    @property
    def pilots_per_tx(self) -> int:
        """每个发射机占用的导频子载波数 N·PR"""
        return int(self.n_fft * self.pilot_ratio)

    @property
    def pilot_scale(self) -> float:
        """导频幅度：受限模式为 1，不受限模式为 √(1/PR)"""
        if self.power_mode is PowerMode.UNCONSTRAINED:
            return float(1 / self.pilot_ratio) ** 0.5
        return 1.0

    def with_noise(self, noise_variance: float) -> "SystemConfig":
        return replace(self, noise_variance=noise_variance)

    @classmethod
    def for_pilot_ratio(cls, scheme: Union[str, Scheme], pilot_ratio, n_fft: int = 256,
                        power_mode: Union[str, PowerMode] = PowerMode.CONSTRAINED,
                        noise_variance: float = 0.0, num_taps: Optional[int] = None,
                        seed: int = 0) -> "SystemConfig":
        """
        按仿真规则派生配置: N_CP = N·PR, U = 1/PR, 抽头数 = N_CP − 1

        PS-ISAC 使用相同的 N_CP 与 U，但 pilot_ratio 固定为 1

        Args:
            scheme: 导频方案
            pilot_ratio: CI-ISAC 意义下的导频比例
            n_fft: FFT 点数
            power_mode: 功率模式
            noise_variance: 噪声方差
            num_taps: 信道抽头数，None 表示 N_CP − 1
            seed: 随机种子

        Returns:
            校验过的 SystemConfig
        """
        pr = parse_ratio(pilot_ratio)
        if pr <= 0 or pr.numerator != 1:
            raise ConfigurationError(f"网格点导频比例必须形如 1/U: {pilot_ratio}")
        n_cp_frac = n_fft * pr
        if n_cp_frac.denominator != 1:
            raise ConfigurationError(f"n_fft·PR 必须为整数: n_fft={n_fft}, PR={pr}")
        n_cp = int(n_cp_frac)
        num_tx = pr.denominator
        if num_taps is None:
            num_taps = max(n_cp - 1, 1)
        scheme = Scheme.parse(scheme)
        return cls(
            n_fft=n_fft,
            n_cp=n_cp,
            num_tx=num_tx,
            pilot_ratio=Fraction(1) if scheme is Scheme.PS_ISAC else pr,
            scheme=scheme,
            power_mode=power_mode,
            noise_variance=noise_variance,
            num_taps=num_taps,
            seed=seed,
        )
