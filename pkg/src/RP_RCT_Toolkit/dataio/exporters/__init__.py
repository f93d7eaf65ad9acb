"""
Exporters of estimation reports and result tables.
"""
from .latex_exporter import LatexExporter
from .report_exporter import (
    FORMATS,
    MARKDOWN_HEADER,
    display_name,
    flat_row,
    parse_reports,
    render_document,
    render_report,
    render_rows,
)

__all__ = [
    'LatexExporter',
    'FORMATS',
    'MARKDOWN_HEADER',
    'display_name',
    'flat_row',
    'parse_reports',
    'render_document',
    'render_report',
    'render_rows',
]
