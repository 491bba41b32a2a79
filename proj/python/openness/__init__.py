"""Spatial openness indicators: visibility graphs over floor plans and
element ratios of interior images."""

from ._core import (
    DEFAULT_GRID_INTERVAL_M,
    ConfigError,
    DomainError,
    FormatError,
    InputError,
    OccupancyGrid,
    OpennessError,
    element_ratios,
    element_ratios_from_ascii,
    floorplan_grid,
    grid_from_ascii,
    heatmap,
    line_of_sight,
    mask_labels,
    ols_trend,
    pearson,
    run_analytics,
    run_compute,
    spearman,
    stars,
    summarize,
    visibility_counts,
)

__all__ = [
    "DEFAULT_GRID_INTERVAL_M",
    "ConfigError",
    "DomainError",
    "FormatError",
    "InputError",
    "OccupancyGrid",
    "OpennessError",
    "element_ratios",
    "element_ratios_from_ascii",
    "floorplan_grid",
    "grid_from_ascii",
    "heatmap",
    "line_of_sight",
    "mask_labels",
    "ols_trend",
    "pearson",
    "run_analytics",
    "run_compute",
    "spearman",
    "stars",
    "summarize",
    "visibility_counts",
]

__version__ = "0.1.0"
