"""
诊断输出
CIR 快照与功率谱/频谱模板研究，结果写成 CSV 供外部绘图
"""

from pathlib import Path
from typing import Dict, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from loguru import logger

from analysis.spectrum import MaskReport, MaskSpec, bin_offsets, mask_check, psd
from estimator.ls_estimator import periodic_cir_view
from harness.experiment_runner import FLOAT_FORMAT, ensure_writable
from harness.trial import simulate_trial
from numerics.random_streams import RngStream
from numerics.transforms import dft
from waveform.ofdm_modulator import modulate_tx, remove_cp
from waveform.pilot_generator import generate_pilots
from utils.errors import ConfigurationError
from waveform.system_config import PowerMode, Scheme, SystemConfig, parse_ratio


def dump_cir_snapshot(cfg: SystemConfig, rng: RngStream, path: Union[str, Path]) -> Path:
    """
    运行一次无噪声试验并写出 CIR 幅度

    PS-ISAC 写出联合 CIR |h̃_T(n)| 及每个样本所属的发射机窗口；
    CI-ISAC 写出每个发射机零填充 IDFT 的周期性 CIR 幅度

    Args:
        cfg: 系统配置（噪声方差被置为 0）
        rng: 随机数流
        path: 输出 CSV 路径

    Returns:
        输出路径
    """
    path = Path(path)
    ensure_writable(path)
    cfg = cfg.with_noise(0.0)
    record = simulate_trial(cfg, rng)
    n = np.arange(cfg.n_fft)

    if cfg.scheme is Scheme.PS_ISAC:
        window = n // cfg.n_cp + 1
        window[window > cfg.num_tx] = 0
        table = pd.DataFrame({
            'n': n,
            'window_tx': window,
            'magnitude': np.abs(record.estimate.joint_cir),
        })
    else:
        y_f = dft(remove_cp(record.received, cfg.n_cp, cfg.n_fft))
        columns = {'n': n}
        for u in range(1, cfg.num_tx + 1):
            columns[f'tx{u}'] = np.abs(periodic_cir_view(y_f, record.pilots, u))
        table = pd.DataFrame(columns)

    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.success(f"CIR 快照已保存: {path}")
    return path


def average_psd(cfg: SystemConfig, rng: RngStream, num_symbols: int, tx_index: int = 1) -> np.ndarray:
    """对第 tx_index 个发射机独立抽取 num_symbols 组导频，返回平均功率谱 (dB)"""
    symbols = [modulate_tx(cfg, generate_pilots(cfg, rng.child(i)), tx_index)
               for i in range(num_symbols)]
    return psd(symbols, cfg.n_fft)


def run_psd_study(n_fft: int, pilot_ratios: Sequence, num_symbols: int, mask: MaskSpec,
                  seed: int, path: Union[str, Path]) -> Tuple[pd.DataFrame, Dict[str, MaskReport]]:
    """
    比较 PS-ISAC 与不同导频比例、功率模式下 CI-ISAC 的功率谱，并做模板检查

    Args:
        n_fft: FFT 点数
        pilot_ratios: CI-ISAC 的导频比例列表
        num_symbols: 平均的符号数
        mask: 频谱模板
        seed: 随机种子
        path: 输出 CSV 路径

    Returns:
        (每子载波功率谱表, 每条曲线的模板检查结果)
    """
    if len(pilot_ratios) == 0:
        raise ConfigurationError("CI-ISAC 导频比例列表不能为空")
    if num_symbols < 1:
        raise ConfigurationError(f"平均符号数必须 ≥ 1: {num_symbols}")
    ratios = [parse_ratio(r) for r in pilot_ratios]
    path = Path(path)
    ensure_writable(path)
    offsets = bin_offsets(n_fft)
    columns = {'bin': np.arange(n_fft), 'frequency_offset': offsets,
               'mask_limit_db': mask.limit_at(offsets)}
    reports: Dict[str, MaskReport] = {}

    cases = [('PS-ISAC', SystemConfig.for_pilot_ratio(Scheme.PS_ISAC, ratios[0], n_fft=n_fft, seed=seed))]
    for pr in ratios:
        for mode in PowerMode:
            tag = 'PC' if mode is PowerMode.CONSTRAINED else 'noPC'
            cfg = SystemConfig.for_pilot_ratio(Scheme.CI_ISAC, pr, n_fft=n_fft, power_mode=mode, seed=seed)
            cases.append((f'CI-ISAC {tag} PR={pr}', cfg))

    for stream_id, (name, cfg) in enumerate(cases):
        level = average_psd(cfg, RngStream(seed, stream_id), num_symbols)
        columns[name] = level
        report = mask_check(level, mask)
        reports[name] = report
        if report.compliant:
            logger.info(f"{name}: 满足频谱模板")
        else:
            logger.warning(f"{name}: {len(report.violations)} 个子载波超出模板, 最大超出 {report.max_excess_db:.2f} dB")

    table = pd.DataFrame(columns)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.success(f"功率谱结果已保存: {path}")
    return table, reports
