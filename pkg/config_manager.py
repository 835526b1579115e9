#!/usr/bin/env python3

from platformdirs import user_config_dir
from enum import Enum
from pathlib import Path
import json
import logging
import os

logger = logging.getLogger(__name__)

CONFIG_DIR_ENV = "SERIATE_CONFIG_DIR"


class ConfigKey(Enum):
    """
    Enumerated config keys with their default values.

    Members are (key, default) pairs so keys with equal defaults stay distinct.
    """
    EIG_TOL = ("eig_tol", "1e-08")
    MULT_TOL = ("mult_tol", "1e-08")
    TIE_TOL = ("tie_tol", "1e-08")
    N_EIGS = ("n_eigs", "3")
    POLICY = ("policy", "p-collapse")
    MAX_ENUMERATE = ("max_enumerate", "1000000")

    def __init__(self, key, default):
        self.key = key
        self.default = default


def config_file() -> Path:
    """Path of config.json; SERIATE_CONFIG_DIR overrides the platform config dir."""
    config_dir = Path(os.environ.get(CONFIG_DIR_ENV) or user_config_dir("seriate"))
    config_dir.mkdir(parents=True, exist_ok=True)
    return config_dir / "config.json"


def _key_names():
    return [key.key for key in ConfigKey]


def load_config():
    """Load all config key-value pairs from config.json."""
    path = config_file()
    if not path.exists():
        return {}
    try:
        with open(path) as f:
            return json.load(f)
    except (json.JSONDecodeError, IOError) as e:
        logger.warning("ignoring unreadable config %s: %s", path, e)
        return {}


def save_config(config_dict):
    """Save config dictionary to config.json."""
    with open(config_file(), "w") as f:
        json.dump(config_dict, f, indent=2)


def get_config_value(key):
    """Get a specific config value by key."""
    config = load_config()
    return config.get(key)


def set_config_value(key, value):
    """
    Set a config key-value pair.

    Raises:
        KeyError: key is not one of the ConfigKey names.
    """
    key = key.lower()
    if key not in _key_names():
        raise KeyError(f"unknown config key '{key}'; valid keys: {', '.join(_key_names())}")
    config = load_config()
    config[key] = value
    save_config(config)


def remove_config_value(key):
    """Remove a config key."""
    config = load_config()
    if key in config:
        del config[key]
        save_config(config)
        return True
    return False


def list_config():
    """List stored config key-value pairs."""
    return load_config()


def effective_config():
    """Defaults, overlaid by stored values, overlaid by SERIATE_* environment variables."""
    from env_loader import env_overrides

    config = {key.key: key.default for key in ConfigKey}
    config.update({k: v for k, v in load_config().items() if k in config})
    config.update(env_overrides())
    return config


def setup_defaults():
    """
    Setup default config key-value pairs.
    Only sets defaults for keys that don't already exist.
    """
    config = load_config()
    defaults_set = []

    for key in ConfigKey:
        if key.key not in config:
            config[key.key] = key.default
            defaults_set.append(key.key)

    if defaults_set:
        save_config(config)

    return defaults_set
