"""
导频生成模块
生成伪随机 QPSK 导频，并按 PS-ISAC（全带共享）或 CI-ISAC（梳状交织）放置
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from numerics.random_streams import RngStream
from waveform.system_config import Scheme, SystemConfig
from utils.errors import InvalidArgumentError


@dataclass(frozen=True)
class PilotGrid:
    """
    各发射机的频域导频网格

    成批仿真时 per_tx_pilots 与 base_pilots 带有一个前导的试验维，
    同一批内的子载波分配相同
    """
    per_tx_pilots: np.ndarray                 # (..., U, N)，CI-ISAC 未占用子载波为 0
    allocation: Tuple[np.ndarray, ...]        # 每个发射机占用的子载波下标
    base_pilots: Optional[np.ndarray] = None  # PS-ISAC 共享的基序列 x_F，形状 (..., N)

    @property
    def num_tx(self) -> int:
        return self.per_tx_pilots.shape[-2]

    @property
    def n_fft(self) -> int:
        return self.per_tx_pilots.shape[-1]

    def pilots_of(self, tx_index: int) -> np.ndarray:
        """第 tx_index 个发射机（从 1 开始）的导频"""
        if not 1 <= tx_index <= self.num_tx:
            raise InvalidArgumentError(f"发射机编号超出范围 [1, {self.num_tx}]: {tx_index}")
        return self.per_tx_pilots[..., tx_index - 1, :]

    def occupied(self, tx_index: int) -> np.ndarray:
        if not 1 <= tx_index <= self.num_tx:
            raise InvalidArgumentError(f"发射机编号超出范围 [1, {self.num_tx}]: {tx_index}")
        return self.allocation[tx_index - 1]


def qpsk_symbols(rng: RngStream, size) -> np.ndarray:
    """单位模 QPSK 符号 e^{jπ(2m+1)/4}, m ∈ {0,1,2,3}"""
    m = rng.generator.integers(0, 4, size=size)
    return np.exp(1j * np.pi * (2 * m + 1) / 4)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def interleaved_allocation(n_fft: int, num_tx: int) -> Tuple[np.ndarray, ...]:
    """CI-ISAC 梳状分配：发射机 u 占用 {k : k mod U = u−1}"""
    return tuple(_frozen(np.arange(u, n_fft, num_tx)) for u in range(num_tx))


@lru_cache(maxsize=None)
def full_band_allocation(n_fft: int, num_tx: int) -> Tuple[np.ndarray, ...]:
    """PS-ISAC：每个发射机占用全部子载波"""
    all_bins = _frozen(np.arange(n_fft))
    return tuple(all_bins for _ in range(num_tx))


def generate_pilots(cfg: SystemConfig, rng: RngStream) -> PilotGrid:
    """
    生成导频网格

    Args:
        cfg: 系统配置（构造时已校验）
        rng: 随机数流

    Returns:
        PilotGrid
    """
    scale = cfg.pilot_scale

    if cfg.scheme is Scheme.PS_ISAC:
        base = _frozen(qpsk_symbols(rng, cfg.n_fft) * scale)
        per_tx = _frozen(np.tile(base, (cfg.num_tx, 1)))
        return PilotGrid(per_tx_pilots=per_tx, allocation=full_band_allocation(cfg.n_fft, cfg.num_tx),
                         base_pilots=base)

    # 一次抽取 (U, N·PR) 个符号，第 u 行放到发射机 u 的梳齿上
    allocation = interleaved_allocation(cfg.n_fft, cfg.num_tx)
    symbols = qpsk_symbols(rng, (cfg.num_tx, cfg.pilots_per_tx)) * scale
    per_tx = np.zeros((cfg.num_tx, cfg.n_fft), dtype=np.complex128)
    for u, bins in enumerate(allocation):
        per_tx[u, bins] = symbols[u]
    return PilotGrid(per_tx_pilots=_frozen(per_tx), allocation=allocation)


def stack_pilot_grids(grids: Sequence[PilotGrid]) -> PilotGrid:
    """
    把多次试验的导频网格沿新的首维堆叠

    Args:
        grids: 子载波分配相同的导频网格

    Returns:
        per_tx_pilots 形状为 (T, U, N) 的 PilotGrid
    """
    if len(grids) == 0:
        raise InvalidArgumentError("导频网格列表不能为空")
    first = grids[0]
    for grid in grids[1:]:
        if grid.allocation is first.allocation:
            continue
        if len(grid.allocation) != len(first.allocation) or not all(
                np.array_equal(a, b) for a, b in zip(grid.allocation, first.allocation)):
            raise InvalidArgumentError("堆叠的导频网格必须使用相同的子载波分配")
    if any((g.base_pilots is None) != (first.base_pilots is None) for g in grids):
        raise InvalidArgumentError("堆叠的导频网格必须同时带或同时不带共享基序列")
    base = None if first.base_pilots is None else np.stack([g.base_pilots for g in grids])
    return PilotGrid(per_tx_pilots=np.stack([g.per_tx_pilots for g in grids]),
                     allocation=first.allocation, base_pilots=base)


def transmit_power(pilots: PilotGrid) -> np.ndarray:
    """每个发射机的总导频功率 Σ|x(k)|²"""
    return np.sum(np.abs(pilots.per_tx_pilots) ** 2, axis=-1)
