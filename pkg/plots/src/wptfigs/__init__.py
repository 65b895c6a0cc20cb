"""Figure rendering for wptplace sweep and field CSV outputs."""

from .render import KINDS, FigureSpec, SchemaError, load_series, read_rows, render

__all__ = ["KINDS", "FigureSpec", "SchemaError", "load_series", "read_rows", "render"]
