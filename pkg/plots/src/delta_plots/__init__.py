from .emit import (
    DeltaSeries,
    MalformedSummary,
    build_figure,
    emit_delta_curves,
    load_summary,
)

__all__ = [
    "DeltaSeries",
    "MalformedSummary",
    "build_figure",
    "emit_delta_curves",
    "load_summary",
]
