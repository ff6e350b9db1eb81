"""
复杂度与最大不模糊距离表格
"""

from dataclasses import replace
from pathlib import Path
from typing import Sequence, Union

import pandas as pd
from loguru import logger

from analysis.complexity import complexity
from analysis.unambiguous_range import RangeConfig, pilot_count, range_report
from harness.experiment_runner import ensure_writable
from utils.errors import InvalidArgumentError
from waveform.system_config import Scheme

COMPLEXITY_METRICS = ['tx_additions', 'tx_multiplications', 'rx_additions', 'rx_multiplications']


def _check_u_list(u_list: Sequence[int]):
    if not u_list:
        raise InvalidArgumentError("发射机数列表不能为空")


def complexity_table(u_list: Sequence[int], n: int) -> pd.DataFrame:
    """两种方案在各 U 下的实数运算次数"""
    _check_u_list(u_list)
    rows = [complexity(scheme, u, n).to_dict() for scheme in Scheme
            for u in u_list]
    table = pd.DataFrame(rows)
    return table.sort_values(['scheme', 'num_tx'], kind='stable').reset_index(drop=True)


def range_table(u_list: Sequence[int], rc: RangeConfig) -> pd.DataFrame:
    """两种方案在各 U 下的最大不模糊距离"""
    _check_u_list(u_list)
    rows = []
    for scheme in (Scheme.CI_ISAC, Scheme.PS_ISAC):
        for u in u_list:
            report = range_report(scheme, u, rc.n_fft, rc.subcarrier_spacing, rc.light_speed)
            rows.append({
                'scheme': scheme.label,
                'num_tx': u,
                'n_pilot': report.n_pilot,
                'r_max_m': report.r_max_m,
                'r_max_table_m': report.table_value_m,
            })
    return pd.DataFrame(rows)


def emit_tables(u_list: Sequence[int], n: int, rc: RangeConfig, path: Union[str, Path]) -> Path:
    """
    把复杂度表与距离表写成一个长格式 CSV: table,scheme,U,metric,value

    Args:
        u_list: 发射机数列表
        n: FFT 点数
        rc: 距离参数（使用其子载波间隔与光速，n_fft 取 n）
        path: 输出路径

    Returns:
        输出路径
    """
    _check_u_list(u_list)
    path = Path(path)
    ensure_writable(path)
    rc = replace(rc, n_fft=n, n_pilot=pilot_count(Scheme.PS_ISAC, n, 1))

    records = []
    for row in complexity_table(u_list, n).itertuples(index=False):
        for metric in COMPLEXITY_METRICS:
            records.append(('complexity', row.scheme, row.num_tx, metric, str(getattr(row, metric))))
    for row in range_table(u_list, rc).itertuples(index=False):
        records.append(('range', row.scheme, row.num_tx, 'r_max_m', repr(float(row.r_max_m))))
        records.append(('range', row.scheme, row.num_tx, 'r_max_table_m', str(row.r_max_table_m)))

    table = pd.DataFrame(records, columns=['table', 'scheme', 'U', 'metric', 'value'])
    table.to_csv(path, index=False, lineterminator='\n')
    logger.success(f"表格已保存: {path}")
    return path
