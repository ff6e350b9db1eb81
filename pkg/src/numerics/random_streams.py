"""
可复现随机数流
每个 (seed, 流路径) 对应一个独立的基于计数器的 Philox 生成器，
与线程数和试验执行顺序无关
"""

from typing import Tuple

import numpy as np

from numerics.transforms import as_complex_vector
from utils.errors import InvalidArgumentError

_U64_MAX = 2 ** 64 - 1


class RngStream:
    """单一所有者的随机数流，不要在线程间共享同一个实例"""

    def __init__(self, seed: int, stream_id: int = 0, _path: Tuple[int, ...] = ()):
        """
        初始化随机数流

        Args:
            seed: 64 位无符号整数种子
            stream_id: 非负流编号（每个 Monte Carlo 试验一个）
        """
        if not 0 <= int(seed) <= _U64_MAX:
            raise InvalidArgumentError(f"seed 必须是 64 位无符号整数: {seed}")
        if int(stream_id) < 0:
            raise InvalidArgumentError(f"stream_id 必须非负: {stream_id}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.spawn_key = (self.stream_id,) + tuple(int(p) for p in _path)
        self._generator = None

    @property
    def generator(self) -> np.random.Generator:
        """首次取用时才构造 Philox 生成器，只用于派生子流的父流不必构造"""
        if self._generator is None:
            sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.spawn_key)
            self._generator = np.random.Generator(np.random.Philox(sequence))
        return self._generator

    def child(self, index: int) -> "RngStream":
        """
        派生子流，相同 (seed, 路径) 总是得到相同序列

        Args:
            index: 子流编号

        Returns:
            新的独立随机数流
        """
        if int(index) < 0:
            raise InvalidArgumentError(f"子流编号必须非负: {index}")
        return RngStream(self.seed, self.stream_id, self.spawn_key[1:] + (int(index),))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, key={self.spawn_key})"


def complex_gaussian(rng: RngStream, n: int, variance: float) -> np.ndarray:
    """
    生成 n 个独立的循环对称复高斯样本 CN(0, variance)

    Args:
        rng: 随机数流
        n: 样本数
        variance: 复方差（实部、虚部各为 variance/2）

    Returns:
        长度为 n 的复数数组
    """
    if int(n) < 1:
        raise InvalidArgumentError(f"样本数必须 ≥ 1: {n}")
    if not variance > 0:
        raise InvalidArgumentError(f"方差必须为正: {variance}")
    g = rng.generator
    real = g.standard_normal(int(n))
    imag = g.standard_normal(int(n))
    return as_complex_vector(np.sqrt(variance / 2.0) * (real + 1j * imag), "noise")
