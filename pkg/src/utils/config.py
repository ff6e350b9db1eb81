"""
配置文件管理模块
"""

import copy
import yaml
from pathlib import Path
from typing import Dict, Any, List
from loguru import logger

from utils.errors import ConfigurationError


DEFAULT_CONFIG: Dict[str, Any] = {
    'system': {
        'n_fft': 256,
        'power_mode': 'constrained',
        'num_taps': None,
        'seed': 2025
    },
    'simulation': {
        'schemes': ['ps_isac', 'ci_isac'],
        'pilot_ratios': ['1/4', '1/8', '1/16'],
        'snr_db': [0, 5, 10, 15, 20, 25, 30],
        'trials': 10000,
        'threads': 1,
        'output_path': 'output/results/mse.csv'
    },
    'cir_dump': {
        'scheme': 'ps_isac',
        'n_fft': 32,
        'num_tx': 4,
        'n_cp': 8,
        'num_taps': 4,
        'output_path': 'output/cir/cir_snapshot.csv'
    },
    'psd': {
        'n_fft': 256,
        'pilot_ratios': ['1/4', '1/8', '1/16'],
        'num_symbols': 1000,
        'mask_file': 'masks/representative_mask.csv',
        'output_path': 'output/psd/psd.csv'
    },
    'tables': {
        'n_fft': 256,
        'num_tx': [4, 8, 16],
        'subcarrier_spacing': 15000.0,
        'light_speed': 2.998e8,
        'output_path': 'output/tables/tables.csv',
        'complexity_output_path': 'output/tables/complexity.csv',
        'range_output_path': 'output/tables/range.csv'
    },
    'logging': {
        'level': 'INFO',
        'format': '{time:YYYY-MM-DD HH:mm:ss} | {level} | {message}',
        'file': 'logs/app.log'
    }
}


class Config:
    """配置管理器"""

    def __init__(self, config_path: str = "config.yaml"):
        """
        初始化配置管理器

        Args:
            config_path: 配置文件路径
        """
        self.config_path = Path(config_path)
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """加载配置文件，缺失的键用默认值补齐"""
        config = self._get_default_config()
        if self.config_path.exists():
            try:
                with open(self.config_path, 'r', encoding='utf-8') as f:
                    loaded = yaml.safe_load(f) or {}
                if not isinstance(loaded, dict):
                    raise ValueError("顶层结构必须是映射")
                self._deep_update(config, loaded)
                logger.info(f"配置文件加载成功: {self.config_path}")
            except Exception as e:
                logger.error(f"配置文件加载失败: {str(e)}，使用默认配置")
        else:
            logger.info("配置文件不存在，使用默认配置")
        return config

    def _get_default_config(self) -> Dict[str, Any]:
        """获取默认配置"""
        return copy.deepcopy(DEFAULT_CONFIG)

    def get(self, key: str, default: Any = None) -> Any:
        """
        获取配置值

        Args:
            key: 配置键，支持点号分隔 (如 'simulation.trials')
            default: 默认值

        Returns:
            配置值
        """
        keys = key.split('.')
        value = self.config

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def get_int(self, key: str, default: int = 0) -> int:
        """
        获取整数配置值

        Raises:
            ConfigurationError: 值不能无损地转换为整数
        """
        value = self.get(key, default)
        try:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise TypeError
            return int(value)
        except (TypeError, ValueError):
            raise ConfigurationError(f"配置项 {key} 必须是整数: {value!r}") from None

    def get_list(self, key: str, default: List[Any]) -> List[Any]:
        """
        获取非空列表配置值

        Raises:
            ConfigurationError: 值不是列表或为空
        """
        value = self.get(key, default)
        if not isinstance(value, (list, tuple)) or len(value) == 0:
            raise ConfigurationError(f"配置项 {key} 必须是非空列表: {value!r}")
        return list(value)

    def set(self, key: str, value: Any):
        """
        设置配置值

        Args:
            key: 配置键
            value: 配置值
        """
        keys = key.split('.')
        config = self.config

        # 导航到目标位置
        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value

    def save(self):
        """保存配置到文件"""
        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, 'w', encoding='utf-8') as f:
                yaml.safe_dump(self.config, f, default_flow_style=False, allow_unicode=True)
            logger.info(f"配置已保存: {self.config_path}")
        except Exception as e:
            logger.error(f"配置保存失败: {str(e)}")

    def update(self, updates: Dict[str, Any]):
        """
        批量更新配置

        Args:
            updates: 更新的配置字典
        """
        self._deep_update(self.config, updates)
        logger.info("配置已更新")

    @staticmethod
    def _deep_update(base_dict: Dict[str, Any], update_dict: Dict[str, Any]):
        for key, value in update_dict.items():
            if isinstance(value, dict) and key in base_dict and isinstance(base_dict[key], dict):
                Config._deep_update(base_dict[key], value)
            else:
                base_dict[key] = value


def create_default_config(config_path: str = "config.yaml"):
    """创建默认配置文件"""
    config = Config(config_path)
    config.save()
    logger.info("默认配置文件已创建")


if __name__ == "__main__":
    create_default_config()
