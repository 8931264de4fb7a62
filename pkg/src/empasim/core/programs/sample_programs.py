"""The shipped sum-up programs and their vector parameterization."""

import logging
import re
from importlib import resources
from typing import List, Sequence, Union

from ..models import RunMode

logger = logging.getLogger(__name__)

SAMPLE_FILES = {
    RunMode.NO: "sumup_no.eys",
    RunMode.FOR: "sumup_for.eys",
    RunMode.SUMUP: "sumup_sumup.eys",
}
DEFAULT_CHILD_LIMIT = 30

_ARRAY_LABEL = re.compile(r"^\s*array\s*:(.*)$")
_LONG_LINE = re.compile(r"^\s*\.long\b", re.IGNORECASE)
_BLANK_OR_COMMENT = re.compile(r"^\s*(#.*)?$")


def _equ_pattern(name: str) -> re.Pattern:
    return re.compile(rf"^(\s*)\.equ\s+{name}\s*,.*$", re.MULTILINE)


def load_sample(mode: Union[RunMode, str]) -> str:
    """
    Return the source text of a shipped sample program.

    Args:
        mode: NO, FOR or SUMUP

    Returns:
        str: Assembly source

    Raises:
        ValueError: If the mode is unknown
    """
    try:
        run_mode = RunMode(mode.upper() if isinstance(mode, str) else mode)
    except ValueError:
        logger.error(f"Unknown sample mode: {mode}")
        raise ValueError(f"unknown sample mode '{mode}', expected one of {[m.value for m in RunMode]}")
    return resources.files(__package__).joinpath(SAMPLE_FILES[run_mode]).read_text(encoding="utf-8")


def vector_for_length(length: int) -> List[int]:
    """The benchmark vector 1..length."""
    if length < 0:
        raise ValueError(f"vector length must not be negative, got {length}")
    return list(range(1, length + 1))


def prepare(source: str, values: Sequence[int], child_limit: int = DEFAULT_CHILD_LIMIT) -> str:
    """
    Rewrite a sample program for a given vector.

    Sets ``.equ VECLEN`` to the vector length, ``.equ CHILDREN`` to
    min(length, child_limit) but at least 1, and replaces the ``.long`` block
    following the ``array:`` label with the values.

    Args:
        source: Sample program text
        values: Vector elements
        child_limit: Most children a SUMUP program may reserve

    Returns:
        str: The rewritten source

    Raises:
        ValueError: If the source has no ``array:`` block
    """
    length = len(values)
    children = max(1, min(length, child_limit))
    source = _equ_pattern("VECLEN").sub(lambda m: f"{m.group(1)}.equ    VECLEN, {length}", source)
    source = _equ_pattern("CHILDREN").sub(lambda m: f"{m.group(1)}.equ    CHILDREN, {children}", source)

    lines = source.splitlines()
    for index, line in enumerate(lines):
        match = _ARRAY_LABEL.match(line)
        if match:
            break
    else:
        logger.error("Sample source has no 'array:' block")
        raise ValueError("source has no 'array:' block to fill")

    end = index + 1
    while end < len(lines) and (_LONG_LINE.match(lines[end]) or _BLANK_OR_COMMENT.match(lines[end])):
        end += 1
    # Keep trailing blank lines and comments outside the data block.
    while end > index + 1 and not _LONG_LINE.match(lines[end - 1]):
        end -= 1

    block = ["array:"] + [f"        .long   {value}" for value in values]
    rewritten = lines[:index] + block + lines[end:]
    logger.debug(f"Prepared program for {length} element(s), {children} child reservation(s)")
    return "\n".join(rewritten) + "\n"


def sample_source(mode: Union[RunMode, str], values: Sequence[int], child_limit: int = DEFAULT_CHILD_LIMIT) -> str:
    """Load a sample program and prepare it for ``values``."""
    return prepare(load_sample(mode), values, child_limit)
