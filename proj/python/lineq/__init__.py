"""Coherence checks for the lineq calculi."""

from ._lineq import (
    Error,
    diagram,
    diversify,
    equal,
    normalize,
    same_generality,
    theories,
    type_of,
)

__all__ = [
    "Error",
    "diagram",
    "diversify",
    "equal",
    "normalize",
    "same_generality",
    "theories",
    "type_of",
]
