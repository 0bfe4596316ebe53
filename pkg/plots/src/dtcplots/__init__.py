"""Plotting companion for the spin-simulator output files.

Consumes only the simulator's documented artifacts (series.csv, spectrum.csv,
sweep.csv, peaks.json, metadata.json) and renders publication-style figures.
"""

from .figures import KINDS, FigureRequest, render
from .schemas import (
    SchemaError,
    caption_text,
    load_metadata,
    load_peaks,
    load_series,
    load_spectrum,
    load_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "FigureRequest",
    "SchemaError",
    "render",
    "caption_text",
    "load_metadata",
    "load_peaks",
    "load_series",
    "load_spectrum",
    "load_sweep",
    "__version__",
]
