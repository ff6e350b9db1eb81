"""
OFDM 调制模块
相移、IDFT 与循环前缀成帧
"""

from typing import Optional

import numpy as np

from numerics.transforms import as_complex_vector, idft
from waveform.pilot_generator import PilotGrid
from waveform.system_config import Scheme, SystemConfig
from utils.errors import InvalidArgumentError


def phase_shift_term(tx_index: int, n_cp: int, n_fft: int) -> np.ndarray:
    """
    相移项 ψ_u(k) = e^{-j2πk(u−1)N_CP/N}

    Args:
        tx_index: 发射机编号 u（从 1 开始）
        n_cp: CP 长度
        n_fft: FFT 点数

    Returns:
        长度为 n_fft 的单位模序列
    """
    if tx_index < 1:
        raise InvalidArgumentError(f"发射机编号必须 ≥ 1: {tx_index}")
    shift = (tx_index - 1) * n_cp
    if shift >= n_fft:
        raise InvalidArgumentError(f"相移量 (u−1)·n_cp = {shift} 必须小于 n_fft = {n_fft}")
    k = np.arange(n_fft)
    # 整数取模后再求相位，u = 1 时严格为 1
    return np.exp(-2j * np.pi * ((k * shift) % n_fft) / n_fft)


def phase_shift(pilots, tx_index: int, n_cp: int, n_fft: int) -> np.ndarray:
    """对频域导频施加发射机专属相移 x^ps = ψ_u ⊙ x"""
    x = as_complex_vector(pilots, "pilots")
    if x.shape[-1] != n_fft:
        raise InvalidArgumentError(f"导频长度 {x.shape[-1]} 与 n_fft = {n_fft} 不一致")
    return x * phase_shift_term(tx_index, n_cp, n_fft)


def add_cp(time, n_cp: int) -> np.ndarray:
    """把符号末尾 n_cp 个样本复制到开头"""
    x = as_complex_vector(time, "time")
    if not 0 <= n_cp < x.shape[-1]:
        raise InvalidArgumentError(f"CP 长度 {n_cp} 必须小于符号长度 {x.shape[-1]}")
    if n_cp == 0:
        return x.copy()
    return np.concatenate([x[..., -n_cp:], x], axis=-1)


def remove_cp(time, n_cp: int, n_fft: Optional[int] = None) -> np.ndarray:
    """
    去除循环前缀

    Args:
        time: 带 CP 的时域信号
        n_cp: CP 长度
        n_fft: 符号主体长度，给出时检查输入长度必须为 n_fft + n_cp

    Returns:
        长度为 N 的符号主体
    """
    x = as_complex_vector(time, "time")
    length = x.shape[-1]
    if n_fft is not None and length != n_fft + n_cp:
        raise InvalidArgumentError(f"输入长度 {length} ≠ n_fft + n_cp = {n_fft + n_cp}")
    if not 0 <= n_cp < length:
        raise InvalidArgumentError(f"CP 长度 {n_cp} 必须小于输入长度 {length}")
    return x[..., n_cp:].copy()


def modulate_tx(cfg: SystemConfig, pilots: PilotGrid, tx_index: int) -> np.ndarray:
    """
    生成第 u 个发射机带 CP 的时域 OFDM 符号

    Args:
        cfg: 系统配置
        pilots: 导频网格
        tx_index: 发射机编号 u（从 1 开始）

    Returns:
        长度为 N + N_CP 的时域信号
    """
    if not 1 <= tx_index <= cfg.num_tx:
        raise InvalidArgumentError(f"发射机编号超出范围 [1, {cfg.num_tx}]: {tx_index}")
    x = pilots.pilots_of(tx_index)
    if cfg.scheme is Scheme.PS_ISAC:
        x = phase_shift(x, tx_index, cfg.n_cp, cfg.n_fft)
    return add_cp(idft(x), cfg.n_cp)


def modulate_all(cfg: SystemConfig, pilots: PilotGrid) -> np.ndarray:
    """
    一次生成所有发射机带 CP 的时域符号

    Args:
        cfg: 系统配置
        pilots: 导频网格，可以带前导的试验维

    Returns:
        形状为 (..., U, N + N_CP) 的时域信号
    """
    x = pilots.per_tx_pilots
    if x.shape[-2:] != (cfg.num_tx, cfg.n_fft):
        raise InvalidArgumentError(f"导频网格形状 {x.shape} 与 (U, N) = ({cfg.num_tx}, {cfg.n_fft}) 不一致")
    if cfg.scheme is Scheme.PS_ISAC:
        psi = np.stack([phase_shift_term(u, cfg.n_cp, cfg.n_fft) for u in range(1, cfg.num_tx + 1)])
        x = x * psi
    return add_cp(idft(x), cfg.n_cp)
