"""
测试公共设置
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# 添加项目根目录与 src 目录到 Python 路径
ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))
sys.path.insert(0, str(ROOT / "src"))

from numerics.random_streams import RngStream  # noqa: E402
from waveform.system_config import PowerMode, Scheme, SystemConfig  # noqa: E402


@pytest.fixture
def rng():
    return RngStream(1234)


@pytest.fixture
def np_rng():
    import numpy as np
    return np.random.default_rng(20250101)


@pytest.fixture
def fig2_cfg():
    """N=32, U=4, N_CP=8, 4 抽头，无噪声"""
    return SystemConfig(n_fft=32, n_cp=8, num_tx=4, pilot_ratio=Fraction(1), scheme=Scheme.PS_ISAC,
                        num_taps=4)


@pytest.fixture
def ci_cfg():
    return SystemConfig(n_fft=32, n_cp=8, num_tx=4, pilot_ratio=Fraction(1, 4), scheme=Scheme.CI_ISAC,
                        power_mode=PowerMode.CONSTRAINED, num_taps=4)
