"""Clock costs of instructions and supervisor operations."""

import logging
from importlib import resources
from pathlib import Path
from typing import Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, PositiveInt, ValidationError

from ..isa import MetaKind, OpClass

logger = logging.getLogger(__name__)

DEFAULT_TIMING_FILE = "timing.cfg"


class TimingConfig(BaseModel):
    """
    Control-clock costs.

    Executable classes are keyed by ``OpClass`` values, supervisor operations
    by ``MetaKind`` values, plus the mass-processing and clone/enable costs.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    halt: PositiveInt
    nop: PositiveInt
    rrmovl: PositiveInt
    irmovl: PositiveInt
    rmmovl: PositiveInt
    mrmovl: PositiveInt
    opl: PositiveInt
    iaddl: PositiveInt
    jxx: PositiveInt
    call: PositiveInt
    ret: PositiveInt
    pushl: PositiveInt
    popl: PositiveInt

    qcreate: PositiveInt
    qterm: PositiveInt
    qwait: PositiveInt
    qprealloc: PositiveInt
    qmass: PositiveInt
    qfwd: PositiveInt

    mass_launch: PositiveInt
    mass_accumulate: PositiveInt
    mass_retire: PositiveInt
    clone: PositiveInt
    enable: PositiveInt

    def cost_of(self, op: OpClass) -> int:
        """Clocks charged for an executable instruction class."""
        return getattr(self, op.value)

    def cost_of_meta(self, kind: MetaKind) -> int:
        """Clocks charged for a supervisor operation."""
        return getattr(self, kind.value)

    def to_text(self) -> str:
        """Render in the ``key = integer`` file format."""
        return "".join(f"{key} = {value}\n" for key, value in self.model_dump().items())

    @classmethod
    def parse(cls, text: str, origin: str = "<text>") -> "TimingConfig":
        """
        Parse ``key = integer`` lines; blank lines and ``#`` comments are ignored.

        Args:
            text: File contents
            origin: Name used in error messages

        Returns:
            TimingConfig: The parsed costs

        Raises:
            ValueError: On malformed lines, unknown keys or non-positive costs
        """
        values: Dict[str, int] = {}
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, separator, value = line.partition("=")
            key = key.strip()
            try:
                if not separator or not key:
                    raise ValueError("expected 'key = integer'")
                if key in values:
                    raise ValueError(f"duplicate key '{key}'")
                values[key] = int(value.strip())
            except ValueError as e:
                logger.error(f"Invalid timing line {origin}:{line_number}: {raw!r}")
                raise ValueError(f"{origin}:{line_number}: {e}")
        try:
            return cls(**values)
        except ValidationError as e:
            logger.error(f"Invalid timing configuration {origin}: {e}")
            raise ValueError(f"{origin}: {e}")

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "TimingConfig":
        """Load a timing file from disk."""
        path = Path(path)
        logger.info(f"Loading timing configuration from {path}")
        return cls.parse(path.read_text(encoding="utf-8"), origin=str(path))

    @classmethod
    def default(cls) -> "TimingConfig":
        """Load the timing file shipped with the package."""
        text = resources.files(__package__).joinpath(DEFAULT_TIMING_FILE).read_text(encoding="utf-8")
        return cls.parse(text, origin=DEFAULT_TIMING_FILE)

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None) -> "TimingConfig":
        """Load ``path`` when given, otherwise the shipped defaults."""
        return cls.from_file(path) if path else cls.default()
