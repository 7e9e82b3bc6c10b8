from pathlib import Path

import pandas as pd
import pytest

from libs.config import DEFAULT_CONFIG, get_setting, load_config, resolve_config
from utils.create_config_template import build_settings_frame, write_template

ROOT = Path(__file__).resolve().parent.parent


def test_shipped_yaml_matches_defaults():
    assert load_config(ROOT / 'config' / 'config.yaml') == DEFAULT_CONFIG


def test_partial_yaml_is_merged_over_defaults(tmp_path):
    path = tmp_path / 'small.yaml'
    path.write_text("oracles:\n  max_subsets: 10\n")
    config = load_config(path)
    assert config['oracles']['max_subsets'] == 10
    assert config['oracles']['max_axis_candidates'] == 8
    assert config['verify'] == DEFAULT_CONFIG['verify']


def test_empty_yaml(tmp_path):
    path = tmp_path / 'empty.yaml'
    path.write_text("")
    assert load_config(path) == DEFAULT_CONFIG


def test_missing_config_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / 'missing.yaml')


def test_resolve_does_not_touch_defaults():
    config = resolve_config({'generator': {'weight_cap': 9}})
    assert config['generator']['weight_cap'] == 9
    assert DEFAULT_CONFIG['generator']['weight_cap'] == 1


def test_get_setting_falls_back():
    assert get_setting(None, 'manipulation', 'max_states') == 200000
    assert get_setting({'manipulation': {}}, 'manipulation', 'max_states') == 200000
    assert get_setting({'verify': {'budget': 5}}, 'verify', 'budget') == 5


def test_template_covers_every_setting():
    frame = build_settings_frame()
    assert list(frame.columns) == ['section', 'setting', 'value', 'notes']
    assert len(frame) == sum(len(values) for values in DEFAULT_CONFIG.values())
    assert frame['notes'].str.len().gt(0).all()


def test_excel_template_round_trip(tmp_path):
    path = tmp_path / 'config_template.xlsx'
    write_template(path)
    assert load_config(path) == DEFAULT_CONFIG


def test_excel_overrides(tmp_path):
    path = tmp_path / 'custom.xlsx'
    rows = pd.DataFrame([
        {'section': 'oracles', 'setting': 'max_assignments', 'value': '1000'},
        {'section': 'logging', 'setting': 'level', 'value': 'DEBUG'},
    ])
    rows.to_excel(path, index=False, sheet_name='settings')
    config = load_config(path)
    assert config['oracles']['max_assignments'] == 1000
    assert config['logging']['level'] == 'DEBUG'
    assert config['manipulation'] == DEFAULT_CONFIG['manipulation']
