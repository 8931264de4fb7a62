"""Aligned plain-text benchmark reports."""

from typing import Sequence

from ..models import ModeResult
from .report_writer import COLUMNS, ReportWriter


class PlainReportWriter(ReportWriter):
    """Whitespace-aligned columns for terminals."""

    def render(self, results: Sequence[ModeResult]) -> str:
        rows = self.rows(results)
        widths = {
            column: max([len(column)] + [len(cells[column]) for cells in rows])
            for column in COLUMNS
        }
        header = "  ".join(column.rjust(widths[column]) for column in COLUMNS)
        lines = [header, "-" * len(header)]
        for cells in rows:
            lines.append("  ".join(cells[column].rjust(widths[column]) for column in COLUMNS))
        return "\n".join(lines) + "\n"
