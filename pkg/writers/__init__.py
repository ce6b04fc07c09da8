"""
Writers Package
JSON and CSV emitters and the optional Excel acceptance workbook
"""

from .csv_writer import write_profile, write_table
from .excel_writer import save_acceptance_workbook
from .json_writer import build_header, save_document, write_document, write_error

__all__ = [
    'write_profile',
    'write_table',
    'save_acceptance_workbook',
    'build_header',
    'save_document',
    'write_document',
    'write_error',
]
