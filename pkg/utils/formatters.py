"""
Formatter Utilities Module
Converts results into JSON-safe values and formats table cells
"""

import dataclasses
import math
from enum import Enum

import numpy as np
import pandas as pd

from core.errors import NonFiniteOutputError


def to_json_safe(value, path="$"):
    """
    Recursively convert results into plain JSON values.

    numpy scalars become Python numbers, arrays become lists, complex numbers
    become {"re", "im"}, enums their value and dataclasses dicts.

    Raises:
        NonFiniteOutputError: A NaN or infinite number is found (path reported)

    Examples:
        >>> to_json_safe({'a': np.float64(0.5), 'b': 1 + 2j})
        {'a': 0.5, 'b': {'re': 1.0, 'im': 2.0}}
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise NonFiniteOutputError(f"Non-finite number {value} at {path}")
        return value
    if isinstance(value, (complex, np.complexfloating)):
        return {'re': to_json_safe(value.real, f"{path}.re"), 'im': to_json_safe(value.imag, f"{path}.im")}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return [to_json_safe(v, f"{path}[{i}]") for i, v in enumerate(value.tolist())]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        if hasattr(value, 'to_dict'):
            return to_json_safe(value.to_dict(), path)
        return to_json_safe(dataclasses.asdict(value), path)
    if isinstance(value, dict):
        return {str(k): to_json_safe(v, f"{path}.{k}") for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_safe(v, f"{path}[{i}]") for i, v in enumerate(value)]
    if isinstance(value, pd.DataFrame):
        return to_json_safe(value.to_dict(orient='records'), path)
    raise TypeError(f"Cannot serialise {type(value).__name__} at {path}")


def format_pass_fail(passed):
    """
    Examples:
        >>> format_pass_fail(True)
        'PASS'
    """
    return "PASS" if passed else "FAIL"


def format_column_width(df, column_name, min_width=12, max_width=60):
    """
    Calculates appropriate column width for Excel export.

    Args:
        df (pd.DataFrame): DataFrame containing the column
        column_name (str): Name of column
        min_width (int): Minimum column width
        max_width (int): Maximum column width

    Returns:
        int: Recommended column width
    """
    if column_name not in df.columns:
        return min_width

    max_length = df[column_name].astype(str).apply(len).max() if len(df) else 0
    length = max(max_length, len(str(column_name)))
    return min(max(length + 2, min_width), max_width)
