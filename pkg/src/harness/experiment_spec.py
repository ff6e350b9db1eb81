"""
实验描述
(方案 × 导频比例 × SNR) 网格及其派生配置
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from utils.config import Config
from utils.errors import ConfigurationError
from waveform.system_config import PowerMode, Scheme, SystemConfig, parse_ratio

SNR_CONVENTION = "SNR per pilot subcarrier for unit-power pilots: noise_variance = 10^(-snr_db/10)"


def noise_variance_from_snr(snr_db: float) -> float:
    """每导频子载波 SNR (dB) → 噪声方差；+inf 表示无噪声"""
    if math.isnan(snr_db):
        raise ConfigurationError("SNR 不能为 NaN")
    if snr_db == math.inf:
        return 0.0
    return 10.0 ** (-snr_db / 10.0)


@dataclass(frozen=True)
class GridPoint:
    """网格中的一个点"""
    index: int
    scheme: Scheme
    pilot_ratio: Fraction
    snr_db: float
    cfg: SystemConfig


@dataclass(frozen=True)
class ExperimentSpec:
    """Monte Carlo 实验描述"""
    base: SystemConfig
    snr_grid_db: Tuple[float, ...]
    schemes: Tuple[Scheme, ...]
    pilot_ratios: Tuple[Fraction, ...]
    num_trials: int
    output_path: Path
    num_taps: Optional[int] = None  # None 表示每个网格点取 N_CP − 1

    def __post_init__(self):
        if not self.snr_grid_db or not self.schemes or not self.pilot_ratios:
            raise ConfigurationError("方案、导频比例与 SNR 网格都不能为空")
        if self.num_trials < 1:
            raise ConfigurationError(f"试验次数必须 ≥ 1: {self.num_trials}")

    @classmethod
    def build(cls, schemes: Sequence, pilot_ratios: Sequence, snr_grid_db: Sequence[float],
              num_trials: int, output_path, n_fft: int = 256,
              power_mode=PowerMode.CONSTRAINED, num_taps: Optional[int] = None,
              seed: int = 0) -> "ExperimentSpec":
        """由简单参数构造实验描述"""
        schemes = tuple(Scheme.parse(s) for s in schemes)
        ratios = tuple(parse_ratio(r) for r in pilot_ratios)
        try:
            snr_grid_db = tuple(float(s) for s in snr_grid_db)
            num_trials = int(num_trials)
        except (TypeError, ValueError):
            raise ConfigurationError(
                f"SNR 网格必须是数值列表、试验次数必须是整数: snr_db={snr_grid_db!r}, trials={num_trials!r}") from None
        if not schemes or not ratios:
            raise ConfigurationError("方案与导频比例列表不能为空")
        base = SystemConfig.for_pilot_ratio(schemes[0], ratios[0], n_fft=n_fft,
                                            power_mode=power_mode, num_taps=num_taps, seed=seed)
        return cls(base=base, snr_grid_db=snr_grid_db,
                   schemes=schemes, pilot_ratios=ratios, num_trials=num_trials,
                   output_path=Path(output_path), num_taps=num_taps)

    @classmethod
    def from_config(cls, config: Config) -> "ExperimentSpec":
        """从配置文件的 system 与 simulation 两节构造"""
        return cls.build(
            schemes=config.get_list('simulation.schemes', ['ps_isac', 'ci_isac']),
            pilot_ratios=config.get_list('simulation.pilot_ratios', ['1/4', '1/8', '1/16']),
            snr_grid_db=config.get_list('simulation.snr_db', [0, 10, 20, 30]),
            num_trials=config.get_int('simulation.trials', 10000),
            output_path=config.get('simulation.output_path', 'output/results/mse.csv'),
            n_fft=config.get_int('system.n_fft', 256),
            power_mode=config.get('system.power_mode', 'constrained'),
            num_taps=config.get('system.num_taps'),
            seed=config.get_int('system.seed', 0),
        )

    @property
    def seed(self) -> int:
        return self.base.seed

    def grid_points(self) -> List[GridPoint]:
        """
        展开网格并校验每个点的派生配置

        Returns:
            按 (方案, 导频比例, SNR) 顺序排列的网格点
        """
        points = []
        for scheme in self.schemes:
            for pr in self.pilot_ratios:
                for snr_db in self.snr_grid_db:
                    try:
                        cfg = SystemConfig.for_pilot_ratio(
                            scheme, pr, n_fft=self.base.n_fft,
                            power_mode=self.base.power_mode,
                            noise_variance=noise_variance_from_snr(snr_db),
                            num_taps=self.num_taps, seed=self.base.seed)
                    except ConfigurationError as e:
                        raise ConfigurationError(
                            f"网格点 ({scheme.label}, PR={pr}, SNR={snr_db} dB) 配置无效: {e}") from e
                    points.append(GridPoint(index=len(points), scheme=scheme, pilot_ratio=pr,
                                            snr_db=snr_db, cfg=cfg))
        return points

    def metadata(self) -> dict:
        """写入结果旁路文件的元数据"""
        return {
            'seed': self.base.seed,
            'trials': self.num_trials,
            'n_fft': self.base.n_fft,
            'power_mode': self.base.power_mode.value,
            'num_taps': 'n_cp - 1' if self.num_taps is None else self.num_taps,
            'schemes': [s.label for s in self.schemes],
            'pilot_ratios': [str(pr) for pr in self.pilot_ratios],
            'snr_db': [float(s) for s in self.snr_grid_db],
            'snr_convention': SNR_CONVENTION,
        }
