"""Figure rendering for fdfv benchmark CSV outputs (CSV-only contract)."""

from .render import KINDS, PlotJob, SchemaError, render

__all__ = ["KINDS", "PlotJob", "SchemaError", "render"]
