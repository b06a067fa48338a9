"""Instrumented classic and dual-pivot Quicksort with a cost-recurrence solver."""

from .costmodel import CostCounters, Cursor, InstrumentedArray
from .sortcore import SamplingScheme, quicksort, sort_keys

__all__ = [
    "CostCounters",
    "Cursor",
    "InstrumentedArray",
    "SamplingScheme",
    "quicksort",
    "sort_keys",
]
__version__ = "0.1.0"
