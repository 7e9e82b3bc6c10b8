"""
Configuration management for the election solvers and oracles.
"""
import copy
import logging

import yaml
import pandas as pd
from pathlib import Path

logger = logging.getLogger(__name__)


DEFAULT_CONFIG = {
    'oracles': {
        'max_axis_candidates': 8,
        'max_subsets': 200000,
        'max_assignments': 500000,
    },
    'manipulation': {
        'max_states': 200000,
    },
    'generator': {
        'weight_cap': 1,
    },
    'verify': {
        'budget': 2,
    },
    'logging': {
        'level': 'WARNING',
    },
}


def load_config(config_path="config/config.yaml"):
    """
    Load configuration from YAML or Excel file.

    Supports both .yaml and .xlsx file formats. The result is merged over
    DEFAULT_CONFIG, so a file only needs the settings it changes.

    Parameters:
    -----------
    config_path : str
        Path to the configuration file (.yaml or .xlsx)

    Returns:
    --------
    dict : Configuration dictionary
    """
    config_path = Path(config_path)
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    if config_path.suffix == '.xlsx':
        config = load_config_from_excel(config_path)
    else:
        with open(config_path, 'r') as f:
            config = yaml.safe_load(f) or {}

    logger.debug(f"Loaded config from {config_path}")
    return resolve_config(config)


def load_config_from_excel(excel_path):
    """
    Load configuration from an Excel workbook.

    Expected tab:
    - settings: section, setting, value

    Parameters:
    -----------
    excel_path : str or Path
        Path to Excel configuration file

    Returns:
    --------
    dict : Configuration dictionary (not yet merged with defaults)
    """
    df_settings = pd.read_excel(excel_path, sheet_name='settings')
    config = {}
    for _, row in df_settings.iterrows():
        section = row['section']
        setting = row['setting']
        value = row['value']
        if pd.isna(section) or pd.isna(setting):
            continue
        config.setdefault(section, {})[setting] = _coerce(value)
    return config


def _coerce(value):
    if isinstance(value, str):
        if value.upper() in ['TRUE', 'FALSE']:
            return value.upper() == 'TRUE'
        try:
            return int(value)
        except ValueError:
            return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def resolve_config(config=None):
    """
    Return DEFAULT_CONFIG with `config` merged over it (section by section).

    Parameters:
    -----------
    config : dict or None
        Partial configuration; None means defaults only

    Returns:
    --------
    dict : Complete configuration dictionary
    """
    merged = copy.deepcopy(DEFAULT_CONFIG)
    for section, values in (config or {}).items():
        if isinstance(values, dict):
            merged.setdefault(section, {}).update(values)
        else:
            merged[section] = values
    return merged


def get_setting(config, section, setting):
    """Look up one setting, falling back to the default value."""
    value = (config or {}).get(section, {}).get(setting)
    if value is None:
        value = DEFAULT_CONFIG[section][setting]
    return value
