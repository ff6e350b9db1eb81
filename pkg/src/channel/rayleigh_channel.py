"""
频率选择性瑞利衰落信道
等功率时延分布，总功率归一化为 1；按线性卷积作用于带 CP 的信号
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import signal

from numerics.random_streams import RngStream, complex_gaussian
from numerics.transforms import as_complex_vector, dft
from utils.errors import ContractViolationError, InvalidArgumentError


@dataclass(frozen=True)
class ChannelRealization:
    """一次信道实现：时域抽头 taps 与 FFT 网格上的频响 cfr"""
    taps: np.ndarray
    cfr: np.ndarray

    @property
    def num_taps(self) -> int:
        return self.taps.size

    @property
    def n_fft(self) -> int:
        return self.cfr.size


def frequency_response(taps, n_fft: int) -> np.ndarray:
    """cfr(k) = Σ_l taps(l)·e^{-j2πkl/N}，沿最后一维计算"""
    h = as_complex_vector(taps, "taps")
    num_taps = h.shape[-1]
    if num_taps > n_fft:
        raise InvalidArgumentError(f"抽头数 {num_taps} 超过 n_fft = {n_fft}")
    padded = np.zeros(h.shape[:-1] + (n_fft,), dtype=np.complex128)
    padded[..., :num_taps] = h
    return np.sqrt(n_fft) * dft(padded)


def channel_from_taps(taps, n_fft: int) -> ChannelRealization:
    """由给定抽头构造信道实现"""
    h = as_complex_vector(taps, "taps").copy()
    cfr = frequency_response(h, n_fft)
    h.setflags(write=False)
    cfr.setflags(write=False)
    return ChannelRealization(taps=h, cfr=cfr)


def draw_channel(rng: RngStream, num_taps: int, n_fft: int) -> ChannelRealization:
    """
    抽取一次瑞利衰落信道，抽头 i.i.d. CN(0, 1/L)

    Args:
        rng: 随机数流
        num_taps: 抽头数 L
        n_fft: FFT 点数

    Returns:
        ChannelRealization
    """
    if not 1 <= num_taps <= n_fft:
        raise InvalidArgumentError(f"需要 1 ≤ num_taps ≤ n_fft: num_taps={num_taps}, n_fft={n_fft}")
    taps = complex_gaussian(rng, num_taps, 1.0 / num_taps)
    return channel_from_taps(taps, n_fft)


def apply_channel(tx_signal_with_cp, ch: ChannelRealization) -> np.ndarray:
    """
    把信道作用于带 CP 的发射信号（线性卷积，截取前 N + N_CP 个样本）

    Args:
        tx_signal_with_cp: 长度 N + N_CP 的时域信号
        ch: 信道实现

    Returns:
        与输入等长的接收信号
    """
    x = as_complex_vector(tx_signal_with_cp, "tx_signal_with_cp")
    if x.ndim != 1:
        raise InvalidArgumentError("apply_channel 只接受一维信号")
    n_cp = x.size - ch.n_fft
    if n_cp < 0:
        raise InvalidArgumentError(f"信号长度 {x.size} 小于 n_fft = {ch.n_fft}")
    if ch.num_taps > n_cp:
        # 抽头超出 CP 会引入符号间干扰，频域乘积关系不再成立
        raise ContractViolationError(f"信道抽头数 {ch.num_taps} 超过 CP 长度 {n_cp}")
    return np.convolve(x, ch.taps, mode="full")[:x.size]


def apply_channels(tx_signals_with_cp, taps, n_cp: int) -> np.ndarray:
    """
    成批的 apply_channel：每一行信号与对应行的抽头做线性卷积

    沿最后一维做 FFT 线性卷积，再截取前 N + N_CP 个样本

    Args:
        tx_signals_with_cp: 形状 (..., N + N_CP) 的时域信号
        taps: 形状 (..., L) 的信道抽头，前导维与信号一致
        n_cp: CP 长度

    Returns:
        与输入同形状的接收信号
    """
    x = as_complex_vector(tx_signals_with_cp, "tx_signals_with_cp")
    h = as_complex_vector(taps, "taps")
    if x.shape[:-1] != h.shape[:-1]:
        raise InvalidArgumentError(f"信号前导维 {x.shape[:-1]} 与抽头前导维 {h.shape[:-1]} 不一致")
    length, num_taps = x.shape[-1], h.shape[-1]
    if num_taps > n_cp:
        raise ContractViolationError(f"信道抽头数 {num_taps} 超过 CP 长度 {n_cp}")
    return signal.fftconvolve(x, h, mode="full", axes=-1)[..., :length]


def superpose_and_add_noise(signals: Sequence, rng: RngStream, noise_variance: float) -> np.ndarray:
    """
    叠加所有发射机的接收信号并加入 AWGN

    Args:
        signals: 等长时域信号列表
        rng: 噪声随机数流
        noise_variance: 噪声方差 σ²，为 0 时不加噪声

    Returns:
        接收信号
    """
    if len(signals) == 0:
        raise InvalidArgumentError("信号列表不能为空")
    arrays = [as_complex_vector(s, "signal") for s in signals]
    length = arrays[0].shape
    if any(a.shape != length for a in arrays):
        raise InvalidArgumentError("所有信号长度必须一致")
    if noise_variance < 0:
        raise InvalidArgumentError(f"噪声方差必须非负: {noise_variance}")
    total = np.sum(arrays, axis=0)
    if noise_variance > 0:
        total = total + complex_gaussian(rng, total.size, noise_variance).reshape(total.shape)
    return total
