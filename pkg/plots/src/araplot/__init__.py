"""Figure rendering for reverse-annealing CSV datasets."""

from .render import KINDS, FigureSpec, SchemaError, render

__all__ = ["KINDS", "FigureSpec", "SchemaError", "render"]
