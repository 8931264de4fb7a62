"""Markdown table benchmark reports."""

from typing import Sequence

from ..models import ModeResult
from .report_writer import COLUMNS, ReportWriter

_NUMERIC = {"length", "clocks", "k", "S", "S_over_k", "alpha_eff"}


class MarkdownReportWriter(ReportWriter):
    """A pipe table with right-aligned numeric columns."""

    def render(self, results: Sequence[ModeResult]) -> str:
        lines = [
            "| " + " | ".join(COLUMNS) + " |",
            "|" + "|".join("---:" if column in _NUMERIC else "---" for column in COLUMNS) + "|",
        ]
        for cells in self.rows(results):
            lines.append("| " + " | ".join(cells[column] for column in COLUMNS) + " |")
        return "\n".join(lines) + "\n"
