"""programs - Shipped sum-up sample programs."""

from .sample_programs import (
    DEFAULT_CHILD_LIMIT,
    SAMPLE_FILES,
    load_sample,
    prepare,
    sample_source,
    vector_for_length,
)

__all__ = [
    "DEFAULT_CHILD_LIMIT",
    "SAMPLE_FILES",
    "load_sample",
    "prepare",
    "sample_source",
    "vector_for_length",
]
