"""Factory for creating report writer instances."""

from typing import Optional, Union

from ..settings import ReportFormat, ReportSettings
from .csv_report_writer import CsvReportWriter
from .markdown_report_writer import MarkdownReportWriter
from .plain_report_writer import PlainReportWriter
from .report_writer import ReportWriter


def create_report_writer(report_format: Optional[Union[ReportFormat, str]] = None) -> ReportWriter:
    """
    Create a report writer for a format.

    Args:
        report_format: Output format; taken from ReportSettings when None

    Returns:
        ReportWriter: Writer for the format

    Raises:
        ValueError: If the format is unknown
    """
    if report_format is None:
        report_format = ReportSettings().report_format
    report_format = ReportFormat(report_format)

    if report_format == ReportFormat.CSV:
        return CsvReportWriter()
    elif report_format == ReportFormat.MARKDOWN:
        return MarkdownReportWriter()
    elif report_format == ReportFormat.PLAIN:
        return PlainReportWriter()
    else:
        raise ValueError(f"Unknown report format: {report_format}")
