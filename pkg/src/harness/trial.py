"""
单次试验
一次 OFDM 符号：生成导频 → 各发射机调制 → 各自过信道 → 叠加加噪 → 接收机估计
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from analysis.metrics import mse, mse_per_trial
from channel.rayleigh_channel import (
    ChannelRealization,
    apply_channel,
    apply_channels,
    draw_channel,
    frequency_response,
    superpose_and_add_noise,
)
from estimator.ls_estimator import EstimationResult, run_receiver
from numerics.random_streams import RngStream, complex_gaussian
from waveform.ofdm_modulator import modulate_all, modulate_tx
from waveform.pilot_generator import PilotGrid, generate_pilots, stack_pilot_grids
from waveform.system_config import Scheme, SystemConfig

# 试验内的子流编号，发射机 u 的信道使用 CHANNEL_STREAM_OFFSET + u
PILOT_STREAM = 0
NOISE_STREAM = 1
CHANNEL_STREAM_OFFSET = 2


@dataclass(frozen=True)
class TrialRecord:
    """一次试验的全部中间量"""
    pilots: PilotGrid
    channels: List[ChannelRealization]
    received: np.ndarray
    estimate: EstimationResult

    @property
    def true_cfrs(self) -> np.ndarray:
        return np.array([ch.cfr for ch in self.channels])


@dataclass(frozen=True)
class TrialOutcome:
    scheme: Scheme
    u: int
    pr: float
    snr_db: float
    trial_id: int
    mse: float
    cir_dump: Optional[np.ndarray] = None


def simulate_trial(cfg: SystemConfig, rng: RngStream) -> TrialRecord:
    """
    执行一次完整的上行传输与接收

    Args:
        cfg: 系统配置
        rng: 本次试验的随机数流

    Returns:
        TrialRecord
    """
    pilots = generate_pilots(cfg, rng.child(PILOT_STREAM))
    channels = [draw_channel(rng.child(CHANNEL_STREAM_OFFSET + u), cfg.num_taps, cfg.n_fft)
                for u in range(1, cfg.num_tx + 1)]
    received = [apply_channel(modulate_tx(cfg, pilots, u), channels[u - 1])
                for u in range(1, cfg.num_tx + 1)]
    y = superpose_and_add_noise(received, rng.child(NOISE_STREAM), cfg.noise_variance)
    estimate = run_receiver(y, pilots, cfg)
    return TrialRecord(pilots=pilots, channels=channels, received=y, estimate=estimate)


def run_trial(cfg: SystemConfig, rng: RngStream, trial_id: int, pr: float, snr_db: float,
              keep_cir: bool = False) -> TrialOutcome:
    """执行一次试验并计算 MSE"""
    record = simulate_trial(cfg, rng)
    cir = record.estimate.joint_cir if keep_cir else None
    return TrialOutcome(scheme=cfg.scheme, u=cfg.num_tx, pr=pr, snr_db=snr_db,
                        trial_id=trial_id, mse=mse(record.true_cfrs, record.estimate),
                        cir_dump=cir)


def draw_taps(cfg: SystemConfig, rng: RngStream) -> np.ndarray:
    """
    抽取一次试验中所有发射机的信道抽头，形状 (U, L)

    第 u 行来自子流 CHANNEL_STREAM_OFFSET + u，与 simulate_trial 中 draw_channel 的抽取完全相同
    """
    return np.stack([complex_gaussian(rng.child(CHANNEL_STREAM_OFFSET + u), cfg.num_taps, 1.0 / cfg.num_taps)
                     for u in range(1, cfg.num_tx + 1)])


def simulate_batch(cfg: SystemConfig, streams: Sequence[RngStream]) -> np.ndarray:
    """
    成批执行多次试验，返回每次试验的 MSE

    随机量仍按试验逐个从各自的流中抽取，之后整批沿 (T, U, N) 数组做调制、信道、接收与误差计算，
    每次试验的结果在舍入误差内与单独调用 run_trial 一致

    Args:
        cfg: 系统配置
        streams: 每次试验的随机数流

    Returns:
        长度为 len(streams) 的 MSE 数组
    """
    pilots = stack_pilot_grids([generate_pilots(cfg, s.child(PILOT_STREAM)) for s in streams])
    taps = np.stack([draw_taps(cfg, s) for s in streams])
    received = apply_channels(modulate_all(cfg, pilots), taps, cfg.n_cp)
    y = np.sum(received, axis=-2)
    if cfg.noise_variance > 0:
        noise = [complex_gaussian(s.child(NOISE_STREAM), y.shape[-1], cfg.noise_variance) for s in streams]
        y = y + np.stack(noise)
    estimate = run_receiver(y, pilots, cfg)
    return mse_per_trial(frequency_response(taps, cfg.n_fft), estimate)
