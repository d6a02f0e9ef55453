"""Rendering for anticoord sweep CSVs."""

from anticoord_plots.render import SchemaError, render_heatmap, render_size_sweep

__all__ = ["SchemaError", "render_heatmap", "render_size_sweep"]
