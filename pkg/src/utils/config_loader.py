import copy
import logging
import os
import re

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), '../../config/lab.yaml')

# ${NAME} or ${NAME:-fallback}
_PLACEHOLDER = re.compile(r'\$\{(\w+)(?::-([^}]*))?\}')


def _expand(text):
    """A value that is exactly one placeholder takes the YAML type of the substituted text; placeholders
    embedded in a longer string are substituted as text. Unresolved placeholders are left in place."""
    whole = _PLACEHOLDER.fullmatch(text)
    if whole:
        name, fallback = whole.groups()
        value = os.getenv(name, fallback)
        if value is None:
            logger.warning(f"Environment variable {name} not found for config placeholder {text}")
            return text
        logger.debug(f"Replacing config placeholder {text} with environment variable {name}")
        return yaml.safe_load(value)

    def substitute(match):
        name, fallback = match.groups()
        value = os.getenv(name, fallback)
        if value is None:
            logger.warning(f"Environment variable {name} not found for config placeholder {match.group(0)}")
            return match.group(0)
        return value

    return _PLACEHOLDER.sub(substitute, text)


def _resolve(item):
    if isinstance(item, dict):
        return {key: _resolve(value) for key, value in item.items()}
    if isinstance(item, list):
        return [_resolve(value) for value in item]
    if isinstance(item, str) and '${' in item:
        return _expand(item)
    return item


class ConfigLoader:
    _instance = None
    _config = None
    _overrides = None
    config_path = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ConfigLoader, cls).__new__(cls)
            cls._instance.reload()
        return cls._instance

    def reload(self):
        """(Re)reads the settings file named by JAMES_LAB_CONFIG, or config/lab.yaml, and drops overrides."""
        load_dotenv()  # Load .env file

        ConfigLoader.config_path = os.getenv('JAMES_LAB_CONFIG', DEFAULT_CONFIG_PATH)
        ConfigLoader._overrides = {}
        try:
            with open(ConfigLoader.config_path, 'r') as f:
                raw = yaml.safe_load(f) or {}
            ConfigLoader._config = _resolve(raw)
            logger.debug(f"Configuration loaded from {ConfigLoader.config_path}")
        except FileNotFoundError:
            logger.error(f"Configuration file not found at {ConfigLoader.config_path}")
            ConfigLoader._config = {}
        except yaml.YAMLError as e:
            logger.error(f"Error parsing YAML configuration file: {e}")
            ConfigLoader._config = {}

    def get_config(self):
        """Returns the loaded configuration with runtime overrides applied."""
        merged = copy.deepcopy(ConfigLoader._config)
        for key, value in ConfigLoader._overrides.items():
            node = merged
            parts = key.split('.')
            for part in parts[:-1]:
                node = node.setdefault(part, {})
            node[parts[-1]] = value
        return merged

    def get_setting(self, key, default=None):
        """Retrieves a setting by dotted path, e.g. 'caps.partition'."""
        if key in ConfigLoader._overrides:
            return ConfigLoader._overrides[key]
        node = ConfigLoader._config
        for part in key.split('.'):
            if not isinstance(node, dict) or part not in node:
                logger.warning(f"Configuration key '{key}' not found. Returning default: {default}")
                return default
            node = node[part]
        return node

    def override(self, key, value):
        """Sets a runtime value for a dotted key (CLI flags, tests, worker processes)."""
        logger.debug(f"Overriding configuration key '{key}' with {value!r}")
        ConfigLoader._overrides[key] = value

    def get_overrides(self):
        return dict(ConfigLoader._overrides)

    def clear_overrides(self):
        ConfigLoader._overrides = {}


def setting(key, default=None):
    """Shorthand for ConfigLoader().get_setting."""
    return ConfigLoader().get_setting(key, default)
