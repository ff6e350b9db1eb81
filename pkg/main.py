"""
上行 OFDMA-ISAC 导频分配仿真主程序
子命令：simulate（MSE 仿真）、complexity（复杂度表）、range（不模糊距离表）、
psd（功率谱与频谱模板）、cir-dump（CIR 快照）
"""

import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

from loguru import logger

# 添加 src 目录到 Python 路径
sys.path.insert(0, str(Path(__file__).parent / "src"))

from analysis.spectrum import DEFAULT_MASK, load_mask
from analysis.unambiguous_range import RangeConfig
from harness.diagnostics import dump_cir_snapshot, run_psd_study
from harness.experiment_runner import ExperimentRunner
from harness.experiment_spec import ExperimentSpec
from harness.tables import complexity_table, emit_tables, range_table
from numerics.random_streams import RngStream
from utils.config import Config
from utils.errors import ConfigurationError, IsacSimulationError
from waveform.system_config import Scheme, SystemConfig


class IsacSimulationApp:
    """仿真应用：加载配置、设置日志并执行各子命令"""

    def __init__(self, config_path: str = "config.yaml"):
        """
        初始化应用

        Args:
            config_path: 配置文件路径
        """
        self.config = Config(config_path)
        self._setup_logging()

    def _setup_logging(self):
        """设置日志"""
        log_level = self.config.get('logging.level', 'INFO')
        log_format = self.config.get('logging.format', '{time:YYYY-MM-DD HH:mm:ss} | {level} | {message}')
        log_file = self.config.get('logging.file', 'logs/app.log')

        # 创建日志目录
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)

        logger.remove()  # 移除默认处理器
        logger.add(sys.stderr, level=log_level, format=log_format)
        logger.add(log_file, level=log_level, format=log_format, rotation="10 MB")

    def apply_overrides(self, output_key: str, seed: Optional[int] = None, trials: Optional[int] = None,
                        out: Optional[str] = None, threads: Optional[int] = None):
        """把命令行全局参数写入配置"""
        if seed is not None:
            self.config.set('system.seed', seed)
        if trials is not None:
            self.config.set('simulation.trials', trials)
        if threads is not None:
            self.config.set('simulation.threads', threads)
        if out is not None:
            self.config.set(output_key, out)

    def simulate(self) -> Dict[str, Any]:
        """MSE Monte Carlo 仿真"""
        spec = ExperimentSpec.from_config(self.config)
        runner = ExperimentRunner(threads=self.config.get_int('simulation.threads', 1))
        table = runner.run_experiment(spec)
        return {'output_path': str(spec.output_path), 'rows': len(table)}

    def complexity(self) -> Dict[str, Any]:
        """复杂度表"""
        n = self.config.get_int('tables.n_fft', 256)
        u_list = self.config.get_list('tables.num_tx', [4, 8, 16])
        table = complexity_table(u_list, n)
        output_path = Path(self.config.get('tables.complexity_output_path', 'output/tables/complexity.csv'))
        output_path.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(output_path, index=False, lineterminator='\n')
        print(table.to_string(index=False))
        logger.success(f"复杂度表已保存: {output_path}")
        return {'output_path': str(output_path)}

    def _range_config(self) -> RangeConfig:
        n = self.config.get_int('tables.n_fft', 256)
        return RangeConfig(
            n_fft=n,
            n_pilot=n,
            subcarrier_spacing=float(self.config.get('tables.subcarrier_spacing', 15e3)),
            light_speed=float(self.config.get('tables.light_speed', 2.998e8)),
        )

    def range(self) -> Dict[str, Any]:
        """最大不模糊距离表"""
        u_list = self.config.get_list('tables.num_tx', [4, 8, 16])
        table = range_table(u_list, self._range_config())
        output_path = Path(self.config.get('tables.range_output_path', 'output/tables/range.csv'))
        output_path.parent.mkdir(parents=True, exist_ok=True)
        table.to_csv(output_path, index=False, lineterminator='\n')
        print(table.to_string(index=False))
        logger.success(f"距离表已保存: {output_path}")
        return {'output_path': str(output_path)}

    def tables(self) -> Dict[str, Any]:
        """两张表合并写出"""
        rc = self._range_config()
        path = emit_tables(self.config.get_list('tables.num_tx', [4, 8, 16]), rc.n_fft, rc,
                           self.config.get('tables.output_path', 'output/tables/tables.csv'))
        return {'output_path': str(path)}

    def psd(self) -> Dict[str, Any]:
        """功率谱与频谱模板检查"""
        mask_file = self.config.get('psd.mask_file')
        if mask_file and Path(mask_file).exists():
            mask = load_mask(mask_file)
            logger.info(f"频谱模板: {mask_file}")
        else:
            mask = DEFAULT_MASK
            logger.warning("未找到频谱模板文件，使用内置代表性模板")
        _, reports = run_psd_study(
            n_fft=self.config.get_int('psd.n_fft', 256),
            pilot_ratios=self.config.get_list('psd.pilot_ratios', ['1/4', '1/8', '1/16']),
            num_symbols=self.config.get_int('psd.num_symbols', 1000),
            mask=mask,
            seed=self.config.get_int('system.seed', 0),
            path=self.config.get('psd.output_path', 'output/psd/psd.csv'),
        )
        for name, report in reports.items():
            status = "合规" if report.compliant else f"超出 {report.max_excess_db:.2f} dB"
            print(f"{name}: {status}")
        return {'output_path': self.config.get('psd.output_path'),
                'compliant': {name: r.compliant for name, r in reports.items()}}

    def cir_dump(self) -> Dict[str, Any]:
        """CIR 快照"""
        n_fft = self.config.get_int('cir_dump.n_fft', 32)
        num_tx = self.config.get_int('cir_dump.num_tx', 4)
        if num_tx < 1:
            raise ConfigurationError(f"cir_dump.num_tx 必须为正: {num_tx}")
        scheme = Scheme.parse(self.config.get('cir_dump.scheme', 'ps_isac'))
        cfg = SystemConfig(
            n_fft=n_fft,
            n_cp=self.config.get_int('cir_dump.n_cp', 8),
            num_tx=num_tx,
            pilot_ratio=Fraction(1) if scheme is Scheme.PS_ISAC else Fraction(1, num_tx),
            scheme=scheme,
            num_taps=self.config.get_int('cir_dump.num_taps', 4),
            seed=self.config.get_int('system.seed', 0),
        )
        path = dump_cir_snapshot(cfg, RngStream(cfg.seed), self.config.get('cir_dump.output_path', 'output/cir/cir_snapshot.csv'))
        return {'output_path': str(path)}


def build_parser():
    import argparse

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', default=argparse.SUPPRESS, help='配置文件路径')
    common.add_argument('--seed', type=int, default=argparse.SUPPRESS, help='随机种子 (u64)')
    common.add_argument('--trials', type=int, default=argparse.SUPPRESS, help='每个网格点的试验次数')
    common.add_argument('--out', default=argparse.SUPPRESS, help='输出文件路径')
    common.add_argument('--threads', type=int, default=argparse.SUPPRESS, help='并行工作进程数')

    parser = argparse.ArgumentParser(description='上行 OFDMA-ISAC 导频分配仿真工具 (PS-ISAC / CI-ISAC)',
                                     parents=[common])
    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('simulate', parents=[common], help='MSE Monte Carlo 仿真')
    sub.add_parser('complexity', parents=[common], help='计算复杂度表')
    sub.add_parser('range', parents=[common], help='最大不模糊距离表')
    sub.add_parser('tables', parents=[common], help='复杂度表与距离表合并输出')
    sub.add_parser('psd', parents=[common], help='功率谱与频谱模板检查')
    sub.add_parser('cir-dump', parents=[common], help='CIR 快照')
    return parser


# 子命令 → (方法名, --out 覆盖的配置键)
COMMANDS = {
    'simulate': ('simulate', 'simulation.output_path'),
    'complexity': ('complexity', 'tables.complexity_output_path'),
    'range': ('range', 'tables.range_output_path'),
    'tables': ('tables', 'tables.output_path'),
    'psd': ('psd', 'psd.output_path'),
    'cir-dump': ('cir_dump', 'cir_dump.output_path'),
}


def main(argv=None):
    """主函数"""
    args = build_parser().parse_args(argv)
    method, output_key = COMMANDS[args.command]

    app = IsacSimulationApp(getattr(args, 'config', 'config.yaml'))
    app.apply_overrides(output_key,
                        seed=getattr(args, 'seed', None),
                        trials=getattr(args, 'trials', None),
                        out=getattr(args, 'out', None),
                        threads=getattr(args, 'threads', None))

    try:
        result = getattr(app, method)()
    except (IsacSimulationError, OSError) as e:
        logger.error(f"{args.command} 执行失败: {str(e)}")
        sys.exit(1)

    logger.info(f"{args.command} 完成: {result.get('output_path')}")
    return result


if __name__ == "__main__":
    main()
