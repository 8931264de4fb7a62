"""Report writers for benchmark tables."""

from .report_writer import COLUMNS, ReportWriter, format_cells
from .csv_report_writer import CsvReportWriter
from .markdown_report_writer import MarkdownReportWriter
from .plain_report_writer import PlainReportWriter
from .report_writer_factory import create_report_writer

__all__ = [
    "COLUMNS",
    "ReportWriter",
    "format_cells",
    "CsvReportWriter",
    "MarkdownReportWriter",
    "PlainReportWriter",
    "create_report_writer",
]
