"""Convergence figures from scaling CSV files (log-log distance/bound vs N)."""

from .render import (
    EmptySelectionError,
    FigureReport,
    PanelReport,
    SchemaError,
    read_scaling_csv,
    render_scaling_figure,
)

__version__ = "0.1.0"

__all__ = [
    "EmptySelectionError",
    "FigureReport",
    "PanelReport",
    "SchemaError",
    "read_scaling_csv",
    "render_scaling_figure",
    "__version__",
]
