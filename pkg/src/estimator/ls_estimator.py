"""
接收机信道估计模块
联合 LS 估计、CFR→CIR 变换、PS-ISAC 的 CIR 窗口分离，以及 CI-ISAC 的逐发射机交织 LS 与插值重建
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from numerics.transforms import as_complex_vector, dft, idft
from waveform.ofdm_modulator import remove_cp
from waveform.pilot_generator import PilotGrid
from waveform.system_config import Scheme, SystemConfig
from utils.errors import (
    ConfigurationError,
    DivisionHazardError,
    InvalidArgumentError,
    WindowOverlapError,
)


@dataclass(frozen=True)
class EstimationResult:
    """估计结果"""
    per_tx_cfr: np.ndarray                  # (U, N) 每个发射机的全带 CFR 估计
    joint_cir: Optional[np.ndarray] = None  # PS-ISAC 联合 CIR h̃_T，CI-ISAC 为 None
    per_tx_cir: Optional[np.ndarray] = None  # 每个发射机恢复出的 CIR 块（已移到原点）

    @property
    def num_tx(self) -> int:
        return self.per_tx_cfr.shape[-2]


def ls_estimate(y_f, known_pilots, occupied: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    LS 信道估计 h̃(k) = y_F(k) / x(k)，沿最后一维进行

    Args:
        y_f: 接收频域信号，可以带前导的试验维
        known_pilots: 与 y_f 同形状的已知导频
        occupied: 占用子载波下标，None 表示全部子载波

    Returns:
        压缩到 |occupied| 长度的 CFR 估计
    """
    y = as_complex_vector(y_f, "y_f")
    x = as_complex_vector(known_pilots, "known_pilots")
    if y.shape != x.shape:
        raise InvalidArgumentError(f"y_f 长度 {y.shape} 与导频长度 {x.shape} 不一致")
    n = y.shape[-1]
    idx = np.arange(n) if occupied is None else np.asarray(occupied, dtype=np.int64)
    if idx.ndim != 1:
        raise InvalidArgumentError(f"occupied 必须是一维下标序列: {idx.shape}")
    outside = idx[(idx < 0) | (idx >= n)]
    if outside.size:
        raise InvalidArgumentError(f"占用子载波下标 {outside.tolist()} 超出 [0, {n})")
    pilots = x[..., idx]
    zero_mask = pilots == 0
    if zero_mask.ndim > 1:
        zero_mask = zero_mask.any(axis=tuple(range(zero_mask.ndim - 1)))
    zero = np.flatnonzero(zero_mask)
    if zero.size:
        raise DivisionHazardError(f"占用子载波 {idx[zero].tolist()} 上导频为零")
    return y[..., idx] / pilots


def _window_blocks(joint_cir: np.ndarray, num_tx: int, n_cp: int) -> np.ndarray:
    """取出每个发射机 [(u−1)N_CP, uN_CP) 的 CIR 块，形状 (..., U, N_CP)"""
    return joint_cir[..., :num_tx * n_cp].reshape(*joint_cir.shape[:-1], num_tx, n_cp)


def separate_ps_isac(h_f_joint, cfg: SystemConfig) -> EstimationResult:
    """
    PS-ISAC 的多发射机 CIR 分离

    联合 CFR 经一次 IDFT 得到联合 CIR，第 u 个发射机的 CIR 位于 [(u−1)N_CP, uN_CP)。
    每个窗口移回原点（即乘以 ψ_u*）后补零做 DFT，得到与未相移真实 CFR 对齐的估计。

    Args:
        h_f_joint: 联合 LS 估计 Σ_u ψ_u ⊙ h_{F,u} + 噪声，可以带前导的试验维
        cfg: 系统配置

    Returns:
        EstimationResult
    """
    if cfg.scheme is not Scheme.PS_ISAC:
        raise ConfigurationError(f"separate_ps_isac 只适用于 PS-ISAC: {cfg.scheme.label}")
    h = as_complex_vector(h_f_joint, "h_f_joint")
    if h.shape[-1] != cfg.n_fft:
        raise InvalidArgumentError(f"h_f_joint 长度 {h.shape} 与 n_fft = {cfg.n_fft} 不一致")
    if cfg.num_tx * cfg.n_cp > cfg.n_fft:
        raise WindowOverlapError(f"U·N_CP = {cfg.num_tx * cfg.n_cp} 超过 N = {cfg.n_fft}")

    joint_cir = idft(h)
    blocks = _window_blocks(joint_cir, cfg.num_tx, cfg.n_cp)
    padded = np.zeros(blocks.shape[:-1] + (cfg.n_fft,), dtype=np.complex128)
    padded[..., :cfg.n_cp] = blocks
    per_tx_cfr = dft(padded)
    return EstimationResult(per_tx_cfr=per_tx_cfr, joint_cir=joint_cir,
                            per_tx_cir=blocks / np.sqrt(cfg.n_fft))


def _check_disjoint(pilots: PilotGrid):
    seen = np.zeros(pilots.n_fft, dtype=bool)
    for bins in pilots.allocation:
        if np.any(seen[bins]):
            raise ConfigurationError("CI-ISAC 各发射机占用的子载波集合必须互不相交")
        seen[bins] = True


def estimate_ci_isac(y_f, pilots: PilotGrid, cfg: SystemConfig) -> EstimationResult:
    """
    CI-ISAC 逐发射机估计

    对每个发射机：在其 N·PR 个交织子载波上做 LS，size-(N·PR) IDFT 得到 CIR，
    去掉梳状偏移带来的相位斜坡后补零到 N 再做 DFT，得到全带 CFR。

    Args:
        y_f: 接收频域信号，可以带前导的试验维
        pilots: 导频网格（成批时与 y_f 的前导维一致）
        cfg: 系统配置

    Returns:
        EstimationResult（joint_cir 为 None）
    """
    if cfg.scheme is not Scheme.CI_ISAC:
        raise ConfigurationError(f"estimate_ci_isac 只适用于 CI-ISAC: {cfg.scheme.label}")
    y = as_complex_vector(y_f, "y_f")
    if y.shape[-1] != cfg.n_fft:
        raise InvalidArgumentError(f"y_f 长度 {y.shape} 与 n_fft = {cfg.n_fft} 不一致")
    _check_disjoint(pilots)

    n = cfg.n_fft
    padded = np.zeros(y.shape[:-1] + (cfg.num_tx, n), dtype=np.complex128)
    cirs = []
    for u in range(1, cfg.num_tx + 1):
        bins = pilots.occupied(u)
        m = bins.size
        h_ls = ls_estimate(y, pilots.pilots_of(u), bins)
        lags = np.arange(m)
        # 梳状偏移 k0 = bins[0] 在时域表现为 e^{-j2πk0·l/N} 的斜坡，这里补偿回来
        ramp = np.exp(2j * np.pi * ((bins[0] * lags) % n) / n)
        cir = idft(h_ls) * ramp / np.sqrt(m)
        padded[..., u - 1, :m] = cir
        cirs.append(cir)
    return EstimationResult(per_tx_cfr=np.sqrt(n) * dft(padded), joint_cir=None,
                            per_tx_cir=np.stack(cirs, axis=-2))


def periodic_cir_view(y_f, pilots: PilotGrid, tx_index: int) -> np.ndarray:
    """
    CI-ISAC 的诊断视图：把交织 LS 估计零填充到 N 后做 size-N IDFT

    结果中发射机的 CIR 以 N/U 为周期重复出现，仅用于展示，不参与估计

    Args:
        y_f: 接收频域信号
        pilots: 导频网格
        tx_index: 发射机编号（从 1 开始）

    Returns:
        长度 N 的时域序列
    """
    y = as_complex_vector(y_f, "y_f")
    bins = pilots.occupied(tx_index)
    grid = np.zeros(pilots.n_fft, dtype=np.complex128)
    grid[bins] = ls_estimate(y, pilots.pilots_of(tx_index), bins)
    return idft(grid)


def run_receiver(y_t_with_cp, pilots: PilotGrid, cfg: SystemConfig) -> EstimationResult:
    """
    接收机主流程：去 CP → DFT → 按方案分发

    PS-ISAC 对共享基导频 x_F 做一次联合 LS，再做 CIR 分离；CI-ISAC 逐发射机估计

    Args:
        y_t_with_cp: 长度 N + N_CP 的接收时域信号，可以带前导的试验维
        pilots: 导频网格（单次或由 stack_pilot_grids 堆叠）
        cfg: 系统配置

    Returns:
        EstimationResult
    """
    y_t = remove_cp(y_t_with_cp, cfg.n_cp, cfg.n_fft)
    y_f = dft(y_t)
    if cfg.scheme is Scheme.PS_ISAC:
        if pilots.base_pilots is None:
            raise ConfigurationError("PS-ISAC 导频网格缺少共享基序列")
        h_joint = ls_estimate(y_f, pilots.base_pilots)
        return separate_ps_isac(h_joint, cfg)
    return estimate_ci_isac(y_f, pilots, cfg)
