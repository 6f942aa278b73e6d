"""Wearable vital-sign filtering, hourly aggregation and SVG chart rendering."""

from ._core import (
    CORE_SIGNALS,
    ConfigError,
    FormatError,
    HourlyGrid,
    IoError,
    PatientRecord,
    RangeError,
    __version__,
    apply_cascade,
    config_schema_json,
    generate_patient,
    hourly_grid,
    map_color_hex,
    moving_average,
    normalize,
    record_from_csv,
    render_barchart_svg,
    render_heatmap_svg,
    run_pipeline,
    tick_stride_hours,
)

__all__ = [
    "CORE_SIGNALS",
    "ConfigError",
    "FormatError",
    "HourlyGrid",
    "IoError",
    "PatientRecord",
    "RangeError",
    "__version__",
    "apply_cascade",
    "config_schema_json",
    "generate_patient",
    "hourly_grid",
    "map_color_hex",
    "moving_average",
    "normalize",
    "record_from_csv",
    "render_barchart_svg",
    "render_heatmap_svg",
    "run_pipeline",
    "tick_stride_hours",
]
