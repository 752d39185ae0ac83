#!/usr/bin/env python3
"""
Suite Config Manager

Loads suite sizes and caps from a YAML file and resolves per-suite settings:
user overrides first, then the file, then built-in defaults.
"""

import copy
import yaml
import logging
from pathlib import Path
from typing import Dict, Optional, Any, Union


BUILTIN_SUITES: Dict[str, Dict[str, int]] = {
    'dg_category': {'instances': 200, 'arity_cap': 4},
    'monoidal': {'instances': 200, 'arity_cap': 4},
    'representation': {'instances': 100, 'arity_cap': 4},
    'ce_pairs': {'instances': 100},
    'braiding': {'arity_cap': 2},
}


class SuiteConfigManager:
    """
    Manages suite sizes and caps.

    Resolution order for a suite setting:
    1. User-provided overrides
    2. The ``suites`` section of the YAML file
    3. Built-in defaults
    """

    def __init__(self, config_file: Optional[Union[str, Path]] = None, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)

        if config_file is None:
            project_root = Path(__file__).parent.parent.parent.parent
            config_file = project_root / "config" / "suites.yaml"

        self.config_file = Path(config_file)
        self.config_data: Dict[str, Any] = {}
        self.user_overrides: Dict[str, Dict[str, Any]] = {}

        self._load_configuration()

    def _load_configuration(self):
        """Load suite settings from the YAML file."""
        try:
            if not self.config_file.exists():
                self.logger.warning(f"Suite config file not found: {self.config_file}")
                self.logger.warning("Using built-in suite defaults")
                self._use_builtin_defaults()
                return

            with open(self.config_file, 'r') as f:
                self.config_data = yaml.safe_load(f) or {}

            self.logger.info(f"Loaded suite settings from: {self.config_file}")
            self._validate_configuration()

        except yaml.YAMLError as e:
            self.logger.error(f"Error parsing YAML configuration: {e}")
            self._use_builtin_defaults()
        except Exception as e:
            self.logger.error(f"Error loading suite configuration: {e}")
            self._use_builtin_defaults()

    def _validate_configuration(self):
        """Drop malformed entries with a warning."""
        if not isinstance(self.config_data, dict):
            self.logger.warning("Suite configuration is not a mapping")
            self._use_builtin_defaults()
            return

        suites = self.config_data.get('suites')
        if not isinstance(suites, dict):
            self.logger.warning("Missing required section 'suites' in configuration")
            self.config_data['suites'] = suites = {}

        for name, settings in list(suites.items()):
            if not isinstance(settings, dict):
                self.logger.warning(f"Invalid suite '{name}': expected dict")
                del suites[name]
                continue
            for key, value in list(settings.items()):
                if not self._is_valid_count(value):
                    self.logger.warning(f"Invalid value for {name}.{key}: {value}")
                    del settings[key]

    def _is_valid_count(self, value: Any) -> bool:
        return isinstance(value, int) and not isinstance(value, bool) and value >= 1

    def _use_builtin_defaults(self):
        self.config_data = {'suites': copy.deepcopy(BUILTIN_SUITES)}

    def set_user_overrides(self, overrides: Dict[str, Dict[str, Any]]):
        """
        Set user-provided per-suite overrides.

        Args:
            overrides: Mapping of suite name to {setting: positive integer}
        """
        self.user_overrides = {}
        for name, settings in overrides.items():
            valid = {k: v for k, v in settings.items() if self._is_valid_count(v)}
            if len(valid) != len(settings):
                self.logger.warning(f"Ignoring invalid overrides for suite {name}: {settings}")
            self.user_overrides[name] = valid

    def get_suite(self, name: str) -> Dict[str, int]:
        """Resolved settings for one suite."""
        if name not in BUILTIN_SUITES and name not in self.config_data.get('suites', {}):
            available = self.list_suites()
            raise ValueError(f"Unknown suite: '{name}'. Available: {available}")
        settings = dict(BUILTIN_SUITES.get(name, {}))
        settings.update(self.config_data.get('suites', {}).get(name, {}))
        settings.update(self.user_overrides.get(name, {}))
        self.logger.debug(f"Suite {name}: {settings}")
        return settings

    def list_suites(self):
        return sorted(set(BUILTIN_SUITES) | set(self.config_data.get('suites', {})))
