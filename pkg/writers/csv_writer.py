"""
CSV Writer Module
Tables (phase profiles, acceptance summaries) written with pandas.
"""

import os
import sys

from core.config import FLOAT_PRECISION


def write_table(df, path=None, columns=None):
    """
    Write a DataFrame as CSV to a file or to standard output.

    Args:
        df (pd.DataFrame): Table to write
        path (str): Target file; None writes to standard output
        columns (list): Optional column subset and order

    Returns:
        str: The path written, or None for standard output
    """
    float_format = f"%.{FLOAT_PRECISION}g"
    if path is None:
        df.to_csv(sys.stdout, index=False, columns=columns, float_format=float_format, lineterminator="\n")
        return None

    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    df.to_csv(path, index=False, columns=columns, float_format=float_format, lineterminator="\n")
    return path


def write_profile(profile, path=None):
    """Staircase profile as q,phase[,fit] CSV."""
    columns = ['q', 'phase'] + (['fit'] if 'fit' in profile.data.columns else [])
    return write_table(profile.data, path, columns=columns)
