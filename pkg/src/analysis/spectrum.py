"""
功率谱与频谱模板检查
平均周期图（无加窗、无重叠），以单位功率导频的平坦电平为 0 dB 参考
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from numerics.transforms import as_complex_vector, dft
from utils.errors import ConfigurationError, InvalidArgumentError

PSD_FLOOR_DB = -300.0


@dataclass(frozen=True)
class MaskSpec:
    """
    分段线性频谱模板

    breakpoints 为 (归一化频率偏移, 相对带内参考电平的限值 dB)，
    频率偏移以采样率为单位、相对中心频率，范围 [-0.5, 0.5)；
    区间外按端点值外推
    """
    breakpoints: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        points = tuple((float(f), float(limit)) for f, limit in self.breakpoints)
        if not points:
            raise ConfigurationError("频谱模板至少需要一个断点")
        freqs = [f for f, _ in points]
        if any(b < a for a, b in zip(freqs, freqs[1:])):
            raise ConfigurationError("频谱模板断点必须按频率升序排列")
        object.__setattr__(self, 'breakpoints', points)

    def limit_at(self, freqs) -> np.ndarray:
        f = np.array([p[0] for p in self.breakpoints])
        limit = np.array([p[1] for p in self.breakpoints])
        return np.interp(freqs, f, limit, left=limit[0], right=limit[-1])


@dataclass(frozen=True)
class MaskReport:
    violations: List[Tuple[int, float]] = field(default_factory=list)  # (子载波, 超出 dB)

    @property
    def compliant(self) -> bool:
        return not self.violations

    @property
    def max_excess_db(self) -> float:
        return max((excess for _, excess in self.violations), default=0.0)


# 代表性的平坦带内模板（非法规数据），比 0 dB 参考高 3 dB
DEFAULT_MASK = MaskSpec(breakpoints=((-0.5, 3.0), (0.5, 3.0)))


def bin_offsets(n_fft: int) -> np.ndarray:
    """子载波 k 对应的归一化频率偏移（与 DFT 下标顺序一致）"""
    return np.fft.fftfreq(n_fft)


def psd(signals: Sequence, n_fft: int) -> np.ndarray:
    """
    平均周期图，单位 dB

    Args:
        signals: 时域符号列表；长度大于 n_fft 时视为带 CP，取最后 n_fft 个样本
        n_fft: FFT 点数

    Returns:
        长度 n_fft 的功率谱 (dB)，零功率子载波取 PSD_FLOOR_DB
    """
    if len(signals) == 0:
        raise InvalidArgumentError("信号列表不能为空")
    bodies = []
    for s in signals:
        x = as_complex_vector(s, "signal")
        if x.ndim != 1 or x.size < n_fft:
            raise InvalidArgumentError(f"符号长度 {x.shape} 小于 n_fft = {n_fft}")
        bodies.append(x[x.size - n_fft:])
    spectra = dft(np.vstack(bodies))
    power = np.mean(np.abs(spectra) ** 2, axis=0)
    with np.errstate(divide='ignore'):
        level = 10 * np.log10(power)
    return np.where(power > 0, level, PSD_FLOOR_DB)


def mask_check(psd_db, mask: MaskSpec) -> MaskReport:
    """
    对照频谱模板检查功率谱

    Args:
        psd_db: 按子载波下标排列的功率谱 (dB)
        mask: 频谱模板

    Returns:
        MaskReport，violations 为空表示合规
    """
    level = np.asarray(psd_db, dtype=float)
    excess = level - mask.limit_at(bin_offsets(level.size))
    over = np.flatnonzero(excess > 0)
    return MaskReport(violations=[(int(k), float(excess[k])) for k in over])


def load_mask(path: Union[str, Path]) -> MaskSpec:
    """
    读取模板文件，每行 `frequency_offset,limit_db`，`#` 开头为注释

    Args:
        path: 模板文件路径

    Returns:
        MaskSpec
    """
    table = pd.read_csv(path, comment='#', header=None, names=['frequency_offset', 'limit_db'],
                        skipinitialspace=True)
    try:
        table = table.apply(pd.to_numeric)
    except (ValueError, TypeError) as e:
        raise ConfigurationError(f"频谱模板文件格式错误: {path}: {e}") from None
    if table.isna().any().any():
        raise ConfigurationError(f"频谱模板文件存在缺失值: {path}")
    return MaskSpec(breakpoints=tuple(table.itertuples(index=False, name=None)))
