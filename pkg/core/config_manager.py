"""
Configuration Manager for lattice, decoder and simulation settings
"""

import copy
import json
import os
import logging
from typing import Dict, Any

from dotenv import load_dotenv

# Переменные окружения: (секция, ключ, тип)
ENV_OVERRIDES = {
    "COLORMAP_LOG_LEVEL": ("logging", "log_level", str),
    "COLORMAP_LOG_DIR": ("logging", "log_dir", str),
    "COLORMAP_WORKERS": ("simulation", "workers", int),
    "COLORMAP_SEED": ("simulation", "seed", int),
    "COLORMAP_MATCHING_BACKEND": ("decoder", "matching_backend", str),
}

class ConfigError(Exception):
    """Ошибка конфигурации"""
    pass

class ConfigManager:
    def __init__(self, config_dir: str = "config", use_env: bool = True):
        self.config_dir = config_dir
        self.use_env = use_env
        self.logger = logging.getLogger(__name__)
        self.app_config = None
        self.load_configs()

    def load_configs(self):
        """Загрузить конфигурационный файл и применить переменные окружения"""
        defaults = self.get_default_app_config()
        app_config_path = os.path.join(self.config_dir, "settings.json")
        try:
            if os.path.exists(app_config_path):
                with open(app_config_path, 'r', encoding='utf-8') as f:
                    loaded = json.load(f)
                self.app_config = self._merge(defaults, loaded)
            else:
                self.logger.warning(f"App config not found: {app_config_path}")
                self.app_config = defaults
        except (OSError, ValueError) as e:
            self.logger.error(f"Error loading configs: {e}")
            self.app_config = defaults

        if self.use_env:
            load_dotenv()
            self.apply_env_overrides()

    @staticmethod
    def _merge(defaults: Dict[str, Any], loaded: Dict[str, Any]) -> Dict[str, Any]:
        """Дополнить загруженные секции значениями по умолчанию"""
        merged = copy.deepcopy(defaults)
        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(merged.get(section), dict):
                merged[section].update(values)
            else:
                merged[section] = values
        return merged

    def apply_env_overrides(self):
        for variable, (section, key, cast) in ENV_OVERRIDES.items():
            raw = os.environ.get(variable)
            if raw is None or raw == "":
                continue
            try:
                value = cast(raw)
            except ValueError:
                self.logger.warning(f"Ignoring {variable}={raw!r}: expected {cast.__name__}")
                continue
            self.app_config.setdefault(section, {})[key] = value
            self.logger.debug(f"{variable} overrides {section}.{key}")

    def get_app_config(self) -> Dict[str, Any]:
        """Получить конфигурацию приложения"""
        return self.app_config

    def get_section(self, section: str) -> Dict[str, Any]:
        """Получить секцию конфигурации"""
        return self.app_config.get(section, {})

    def get(self, section: str, key: str, default: Any = None) -> Any:
        return self.get_section(section).get(key, default)

    def get_default_app_config(self) -> Dict[str, Any]:
        """Конфигурация приложения по умолчанию"""
        return {
            "application": {
                "name": "Colormap",
                "version": "1.0.0",
                "description": "Color code to surface code mapping, decoding and threshold simulation"
            },
            "lattice": {
                "family": "square-octagon",
                "size": 4,
                "contract_color": None,
                "m_rule": None
            },
            "decoder": {
                "matching_backend": "pymatching",
                "weighted": False,
                "naive_erasure_map": False
            },
            "simulation": {
                "trials": 20000,
                "seed": 7,
                "workers": 1,
                "chunk_size": 1000,
                "output_dir": "results",
                "write_gnuplot": True
            },
            "logging": {
                "log_level": "INFO",
                "log_dir": "logs",
                "enable_file_logging": True,
                "log_retention_days": 30
            },
            "cache": {
                "artifact_ttl": 3600
            }
        }

    def save_config(self, config_data: Dict[str, Any]):
        """Сохранить конфигурацию"""
        try:
            os.makedirs(self.config_dir, exist_ok=True)
            config_path = os.path.join(self.config_dir, "settings.json")

            with open(config_path, 'w', encoding='utf-8') as f:
                json.dump(config_data, f, ensure_ascii=False, indent=2)

            self.app_config = self._merge(self.get_default_app_config(), config_data)
            self.logger.info(f"Saved configuration to {config_path}")

        except OSError as e:
            self.logger.error(f"Error saving config: {e}")
            raise ConfigError(f"Cannot write {self.config_dir}: {e}") from e
