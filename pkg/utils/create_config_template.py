"""
Helper script to create an Excel configuration template (settings sheet).

Run this to generate config_template.xlsx with every setting and its default.
Edit the values and pass the workbook to main_cli.py with --config.
"""
import sys
from pathlib import Path

import pandas as pd

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from libs.config import DEFAULT_CONFIG  # noqa: E402

NOTES = {
    ('oracles', 'max_axis_candidates'): 'Largest m for axis enumeration (brute_axis, axis-free manipulation)',
    ('oracles', 'max_subsets'): 'Candidate subsets brute_control may try',
    ('oracles', 'max_assignments'): 'Voter count vectors / manipulator ballot assignments the oracles may try',
    ('manipulation', 'max_states'): 'Frontier size limit per manipulator in exact_ccwm',
    ('generator', 'weight_cap'): 'Largest ballot weight in random profiles',
    ('verify', 'budget'): 'Control budget used by verify',
    ('logging', 'level'): 'DEBUG, INFO, WARNING or ERROR',
}


def build_settings_frame():
    rows = []
    for section, values in DEFAULT_CONFIG.items():
        for setting, value in values.items():
            rows.append({'section': section, 'setting': setting, 'value': value,
                         'notes': NOTES.get((section, setting), '')})
    return pd.DataFrame(rows, columns=['section', 'setting', 'value', 'notes'])


def write_template(output_file='config_template.xlsx'):
    settings = build_settings_frame()
    settings.to_excel(output_file, index=False, sheet_name='settings')
    return settings


if __name__ == '__main__':
    output_file = sys.argv[1] if len(sys.argv) > 1 else 'config_template.xlsx'
    settings = write_template(output_file)

    print("=" * 80)
    print("CONFIG TEMPLATE")
    print("=" * 80)
    print(settings.to_string(index=False))
    print(f"\nTemplate saved to: {output_file}")
    print("Edit the 'value' column and run: python main_cli.py --config " + output_file + " ...")
