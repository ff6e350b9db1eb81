"""
离散傅里叶变换模块
酉归一化 (1/√N, 1/√N) 的 DFT/IDFT，长度为 2 的幂时使用基 2 FFT
"""

from functools import lru_cache

import numpy as np
from scipy import fft as sp_fft

from utils.errors import InvalidArgumentError


def as_complex_vector(x, name: str = "x") -> np.ndarray:
    """
    转换为复数数组并检查有效性

    Args:
        x: 输入序列（一维或二维，变换沿最后一维进行）
        name: 参数名，用于错误信息

    Returns:
        complex128 数组
    """
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.shape[-1] == 0:
        raise InvalidArgumentError(f"{name} 不能为空")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} 含有非有限值")
    return arr


def is_power_of_two(n: int) -> bool:
    """判断 n 是否为 2 的正整数次幂（含 1）"""
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


@lru_cache(maxsize=None)
def _bit_reverse_indices(n: int) -> np.ndarray:
    """长度 n 的比特反转置换"""
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    rev.setflags(write=False)
    return rev


@lru_cache(maxsize=None)
def _twiddles(m: int, sign: int) -> np.ndarray:
    """第 m 级蝶形的旋转因子"""
    w = np.exp(sign * 1j * np.pi * np.arange(m) / m)
    w.setflags(write=False)
    return w


def _radix2(x: np.ndarray, sign: int) -> np.ndarray:
    """
    迭代式按时间抽取基 2 FFT（未归一化）

    Args:
        x: 最后一维长度为 2 的幂的复数数组
        sign: 指数符号，-1 为正变换，+1 为逆变换

    Returns:
        与 x 同形状的变换结果
    """
    n = x.shape[-1]
    lead = x.shape[:-1]
    a = x[..., _bit_reverse_indices(n)]
    m = 1
    while m < n:
        twiddle = _twiddles(m, sign)
        blocks = a.reshape(*lead, n // (2 * m), 2 * m)
        even = blocks[..., :m]
        odd = blocks[..., m:] * twiddle
        a = np.concatenate([even + odd, even - odd], axis=-1).reshape(*lead, n)
        m *= 2
    return a


def dft(x) -> np.ndarray:
    """
    酉 DFT: X(k) = (1/√N) Σ x(n)·e^{-j2πnk/N}

    Args:
        x: 时域序列，二维输入时逐行变换

    Returns:
        频域序列
    """
    arr = as_complex_vector(x)
    n = arr.shape[-1]
    if is_power_of_two(n):
        return _radix2(arr, -1) / np.sqrt(n)
    return sp_fft.fft(arr, axis=-1, norm="ortho")


def idft(x) -> np.ndarray:
    """
    酉 IDFT: y(n) = (1/√N) Σ x(k)·e^{j2πkn/N}

    Args:
        x: 频域序列，二维输入时逐行变换

    Returns:
        时域序列
    """
    arr = as_complex_vector(x)
    n = arr.shape[-1]
    if is_power_of_two(n):
        return _radix2(arr, +1) / np.sqrt(n)
    return sp_fft.ifft(arr, axis=-1, norm="ortho")


def _dft_matrix(n: int, sign: int) -> np.ndarray:
    k = np.arange(n)
    # 先取模，保证相位参数较小
    phase = np.outer(k, k) % n
    return np.exp(sign * 2j * np.pi * phase / n) / np.sqrt(n)


def direct_dft(x) -> np.ndarray:
    """O(N²) 直接求和的酉 DFT，作为测试基准"""
    arr = as_complex_vector(x)
    return arr @ _dft_matrix(arr.shape[-1], -1).T


def direct_idft(x) -> np.ndarray:
    """O(N²) 直接求和的酉 IDFT，作为测试基准"""
    arr = as_complex_vector(x)
    return arr @ _dft_matrix(arr.shape[-1], +1).T
