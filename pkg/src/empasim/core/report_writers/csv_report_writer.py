"""CSV benchmark reports."""

import csv
import io
from typing import Sequence

from ..models import ModeResult
from .report_writer import COLUMNS, ReportWriter


class CsvReportWriter(ReportWriter):
    """Comma-separated output with a header line."""

    def render(self, results: Sequence[ModeResult]) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows(results))
        return buffer.getvalue()
