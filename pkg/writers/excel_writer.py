"""
Excel Writer Module
Multi-sheet acceptance workbook for report-all
"""

import json
import os
from datetime import datetime

import pandas as pd
from openpyxl.styles import Font, PatternFill
from openpyxl.utils import get_column_letter

from core.config import OUTPUT_FOLDER
from utils.formatters import format_column_width
from utils.logger import get_logger

logger = get_logger(module_name="excel_writer")

FAIL_FILL = PatternFill(start_color="FFCCCC", end_color="FFCCCC", fill_type="solid")
PASS_FILL = PatternFill(start_color="CCFFCC", end_color="CCFFCC", fill_type="solid")


def get_output_file_path(timestamp=None):
    """
    OUTPUT/report_all/acceptance_<timestamp>.xlsx

    Returns:
        str: Full path to the workbook
    """
    if timestamp is None:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    output_folder = os.path.join(OUTPUT_FOLDER, "report_all")
    os.makedirs(output_folder, exist_ok=True)
    return os.path.join(output_folder, f"acceptance_{timestamp}.xlsx")


def save_acceptance_workbook(sheets, path=None):
    """
    Save one sheet per table; rows with passed == False are highlighted red.

    Args:
        sheets (dict): sheet name -> DataFrame
        path (str): Target path (default: timestamped file under OUTPUT/)

    Returns:
        str: The path written
    """
    path = path or get_output_file_path()
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)

    with pd.ExcelWriter(path, engine='openpyxl') as writer:
        for name, df in sheets.items():
            sheet_name = name[:31]
            if len(df) == 0:
                pd.DataFrame([['No rows']]).to_excel(writer, sheet_name=sheet_name, index=False, header=False)
                continue
            df = flatten_cells(df)
            df.to_excel(writer, sheet_name=sheet_name, index=False)
            worksheet = writer.sheets[sheet_name]
            worksheet.auto_filter.ref = worksheet.dimensions
            for cell in worksheet[1]:
                cell.font = Font(bold=True)
            adjust_column_widths(worksheet, df)
            highlight_results(worksheet, df)

    logger.info(f"Acceptance workbook saved to {path}")
    return path


def adjust_column_widths(worksheet, df):
    """Auto-adjust column widths."""
    for idx, col in enumerate(df.columns, start=1):
        worksheet.column_dimensions[get_column_letter(idx)].width = format_column_width(df, col)


def highlight_results(worksheet, df):
    """Colour whole rows by their 'passed' column, when present."""
    if 'passed' not in df.columns:
        return
    for row_idx, passed in enumerate(df['passed'], start=2):
        fill = PASS_FILL if bool(passed) else FAIL_FILL
        for col_idx in range(1, len(df.columns) + 1):
            worksheet.cell(row=row_idx, column=col_idx).fill = fill


def flatten_cells(df):
    """Nested dict / list cells become JSON text (openpyxl writes scalars only)."""
    return df.map(lambda v: json.dumps(v, default=str) if isinstance(v, (dict, list)) else v)
