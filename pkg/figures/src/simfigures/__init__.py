"""Figure rendering for simulation sweep CSVs."""

__version__ = "0.1.0"

from .data import FigureDataError, load_results
from .render import FigureSpec, render

__all__ = ["FigureDataError", "FigureSpec", "load_results", "render"]
