"""
Monte Carlo 实验执行器
按 (网格点, 试验编号) 预分配随机数流，任务按固定的 chunk_size 切分，结果与并行进程数和调度顺序无关
"""

import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
import pandas as pd
import yaml
from loguru import logger
from tqdm import tqdm

from harness.experiment_spec import ExperimentSpec, GridPoint
from harness.trial import simulate_batch
from numerics.random_streams import RngStream
from waveform.system_config import SystemConfig

RESULT_COLUMNS = ['scheme', 'U', 'PR', 'snr_db', 'trials', 'mse_mean', 'mse_stderr']
FLOAT_FORMAT = '%.14e'


def trial_stream(seed: int, point_index: int, trial_id: int) -> RngStream:
    """网格点 point_index 上第 trial_id 次试验的随机数流"""
    return RngStream(seed, point_index).child(trial_id)


def run_chunk(cfg: SystemConfig, seed: int, point_index: int, start: int, stop: int) -> np.ndarray:
    """在网格点 point_index 上成批执行试验 [start, stop)，返回各次试验的 MSE"""
    streams = [trial_stream(seed, point_index, trial_id) for trial_id in range(start, stop)]
    return simulate_batch(cfg, streams)


def ensure_writable(path: Path):
    """在开始计算之前确认输出路径可写，失败时抛出 OSError"""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'a', encoding='utf-8'):
        pass


def mean_and_stderr(values: np.ndarray) -> Tuple[float, float]:
    """补偿求和的均值与标准误，结果与求和顺序无关"""
    n = values.size
    mean = math.fsum(values.tolist()) / n
    if n < 2:
        return mean, 0.0
    variance = math.fsum(((values - mean) ** 2).tolist()) / (n - 1)
    return mean, math.sqrt(variance / n)


class ExperimentRunner:
    """Monte Carlo 实验执行器"""

    def __init__(self, threads: int = 1, chunk_size: int = 128, show_progress: bool = True):
        """
        初始化执行器

        Args:
            threads: 并行工作进程数（对应命令行 --threads），1 表示在当前进程内执行
            chunk_size: 每个任务成批执行的试验次数
            show_progress: 是否显示进度条
        """
        self.threads = max(1, int(threads))
        self.chunk_size = max(1, int(chunk_size))
        self.show_progress = show_progress

    def _run_chunk(self, point: GridPoint, seed: int, start: int, stop: int) -> Tuple[int, int, np.ndarray]:
        return point.index, start, run_chunk(point.cfg, seed, point.index, start, stop)

    def _tasks(self, points: List[GridPoint], num_trials: int):
        for point in points:
            for start in range(0, num_trials, self.chunk_size):
                yield point, start, min(start + self.chunk_size, num_trials)

    def run_experiment(self, spec: ExperimentSpec) -> pd.DataFrame:
        """
        执行整个网格的 Monte Carlo 仿真并写出 CSV

        Args:
            spec: 实验描述

        Returns:
            每个网格点一行的结果表
        """
        output_path = Path(spec.output_path)
        points = spec.grid_points()
        ensure_writable(output_path)
        num_trials = spec.num_trials
        logger.info(f"开始仿真: {len(points)} 个网格点 × {num_trials} 次试验, 并行进程数 {self.threads}")

        samples: Dict[int, np.ndarray] = {p.index: np.empty(num_trials) for p in points}
        tasks = list(self._tasks(points, num_trials))
        progress = tqdm(total=len(points) * num_trials, desc="Monte Carlo",
                        unit="trial", disable=not self.show_progress)

        def collect(index: int, start: int, values: np.ndarray):
            samples[index][start:start + values.size] = values
            progress.update(values.size)

        try:
            if self.threads == 1:
                for point, start, stop in tasks:
                    collect(*self._run_chunk(point, spec.seed, start, stop))
            else:
                with ProcessPoolExecutor(max_workers=self.threads) as pool:
                    futures = {pool.submit(run_chunk, point.cfg, spec.seed, point.index, start, stop):
                               (point.index, start) for point, start, stop in tasks}
                    for future in as_completed(futures):
                        collect(*futures[future], future.result())
        finally:
            progress.close()

        rows = []
        for point in points:
            mean, stderr = mean_and_stderr(samples[point.index])
            rows.append({
                'scheme': point.scheme.label,
                'U': point.cfg.num_tx,
                'PR': float(point.pilot_ratio),
                'snr_db': float(point.snr_db),
                'trials': num_trials,
                'mse_mean': mean,
                'mse_stderr': stderr,
            })
            logger.debug(f"{point.scheme.label} PR={point.pilot_ratio} SNR={point.snr_db} dB: MSE={mean:.4e}")
        table = pd.DataFrame(rows, columns=RESULT_COLUMNS)

        self._save_results(table, spec, output_path)
        logger.success(f"仿真完成: {output_path}")
        return table

    def _save_results(self, table: pd.DataFrame, spec: ExperimentSpec, output_path: Path):
        """单写者输出：CSV 结果 + YAML 元数据"""
        table.to_csv(output_path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        meta_path = output_path.with_name(output_path.name + '.meta.yaml')
        with open(meta_path, 'w', encoding='utf-8') as f:
            yaml.safe_dump(spec.metadata(), f, default_flow_style=False, allow_unicode=True,
                           sort_keys=False)
        logger.info(f"元数据已保存: {meta_path}")
