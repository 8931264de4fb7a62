"""Tests for benchmark report writers."""

import io

import pytest

from empasim.core import ModeResult, RunMode, create_report_writer
from empasim.core.report_writers import (
    CsvReportWriter,
    MarkdownReportWriter,
    PlainReportWriter,
    format_cells,
)


@pytest.fixture
def rows():
    """A baseline row and a SUMUP row for length 2."""
    return [
        ModeResult(length=2, mode=RunMode.NO, clocks=82, k=1, speedup=1.0, s_over_k=1.0, alpha_eff=None),
        ModeResult(length=2, mode=RunMode.SUMUP, clocks=34, k=3, speedup=82 / 34,
                   s_over_k=82 / 34 / 3, alpha_eff=0.8719),
    ]


class TestFormatCells:
    """Tests for cell formatting."""

    def test_two_decimals(self, rows):
        """Test real-valued cells are rounded to two decimals."""
        cells = format_cells(rows[1])
        assert cells["S"] == "2.41"
        assert cells["S_over_k"] == "0.80"
        assert cells["alpha_eff"] == "0.87"

    def test_baseline_alpha_shown_as_one(self, rows):
        """Test the single-core row prints an effective parallelization of 1."""
        assert format_cells(rows[0])["alpha_eff"] == "1.00"


class TestCsvReportWriter:
    """Tests for CSV output."""

    def test_render(self, rows):
        """Test header and rows are comma separated."""
        lines = CsvReportWriter().render(rows).splitlines()
        assert lines[0] == "length,mode,clocks,k,S,S_over_k,alpha_eff"
        assert lines[1] == "2,NO,82,1,1.00,1.00,1.00"
        assert lines[2] == "2,SUMUP,34,3,2.41,0.80,0.87"

    def test_empty(self):
        """Test an empty table still carries the header."""
        assert CsvReportWriter().render([]) == "length,mode,clocks,k,S,S_over_k,alpha_eff\n"

    def test_write_to_stream(self, rows):
        """Test write() emits the rendered text."""
        stream = io.StringIO()
        writer = CsvReportWriter()
        writer.write(rows, stream)
        assert stream.getvalue() == writer.render(rows)


class TestMarkdownReportWriter:
    """Tests for markdown output."""

    def test_render(self, rows):
        """Test the pipe table with alignment row."""
        lines = MarkdownReportWriter().render(rows).splitlines()
        assert lines[0] == "| length | mode | clocks | k | S | S_over_k | alpha_eff |"
        assert lines[1] == "|---:|---|---:|---:|---:|---:|---:|"
        assert lines[3] == "| 2 | SUMUP | 34 | 3 | 2.41 | 0.80 | 0.87 |"


class TestPlainReportWriter:
    """Tests for plain text output."""

    def test_columns_aligned(self, rows):
        """Test every line has the header's width."""
        lines = PlainReportWriter().render(rows).splitlines()
        assert set(lines[1]) == {"-"}
        assert len({len(line) for line in lines}) == 1
        assert lines[3].split() == ["2", "SUMUP", "34", "3", "2.41", "0.80", "0.87"]


class TestReportWriterFactory:
    """Tests for create_report_writer()."""

    @pytest.mark.parametrize("name,cls", [
        ("csv", CsvReportWriter),
        ("markdown", MarkdownReportWriter),
        ("plain", PlainReportWriter),
    ])
    def test_by_name(self, name, cls):
        """Test each format name maps to its writer."""
        assert isinstance(create_report_writer(name), cls)

    def test_default_from_settings(self, monkeypatch):
        """Test the format falls back to the environment setting."""
        monkeypatch.setenv("EMPASIM_REPORT_REPORT_FORMAT", "markdown")
        assert isinstance(create_report_writer(), MarkdownReportWriter)

    def test_unknown(self):
        """Test an unknown format is rejected."""
        with pytest.raises(ValueError):
            create_report_writer("html")
