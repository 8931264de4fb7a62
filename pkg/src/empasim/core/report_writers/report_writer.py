"""ReportWriter - Abstract base class for rendering benchmark tables."""

from abc import ABC, abstractmethod
from typing import IO, Dict, List, Sequence

from ..models import ModeResult

COLUMNS = ["length", "mode", "clocks", "k", "S", "S_over_k", "alpha_eff"]


def format_cells(result: ModeResult) -> Dict[str, str]:
    """
    Format one row for display.

    Real-valued columns use two decimals; the single-core baseline shows an
    effective parallelization of 1.

    Args:
        result: The row to format

    Returns:
        Dict[str, str]: Cell text keyed by column name
    """
    alpha = 1.0 if result.alpha_eff is None else result.alpha_eff
    return {
        "length": str(result.length),
        "mode": result.mode.value,
        "clocks": str(result.clocks),
        "k": str(result.k),
        "S": f"{result.speedup:.2f}",
        "S_over_k": f"{result.s_over_k:.2f}",
        "alpha_eff": f"{alpha:.2f}",
    }


class ReportWriter(ABC):
    """Abstract base class for benchmark report output."""

    @abstractmethod
    def render(self, results: Sequence[ModeResult]) -> str:
        """
        Render rows as text.

        Args:
            results: Rows in output order

        Returns:
            str: The complete report

        Raises:
            NotImplementedError: If not implemented by subclass
        """
        raise NotImplementedError

    def write(self, results: Sequence[ModeResult], stream: IO[str]) -> None:
        """
        Write the rendered report to an open stream.

        Args:
            results: Rows in output order
            stream: Destination text stream
        """
        stream.write(self.render(results))

    @staticmethod
    def rows(results: Sequence[ModeResult]) -> List[Dict[str, str]]:
        """Formatted cells for every row."""
        return [format_cells(result) for result in results]
