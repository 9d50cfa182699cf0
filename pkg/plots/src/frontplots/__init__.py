"""Figure rendering for frontspec CSV artifacts."""

__version__ = "0.1.0"

from .render import FigureSpec, SchemaError, render, FIGURE_KINDS  # noqa: F401
