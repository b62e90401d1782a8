"""Dataset ingestion, splitting, standardization, and windowing."""

from .series import RawSeries, load_csv, save_csv
from .split import NormalizationStats, Segment, SplitSpec, split_series, standardize
from .synth import synth_generate
from .windows import WindowSet, make_windows

__all__ = [
    "RawSeries",
    "load_csv",
    "save_csv",
    "NormalizationStats",
    "Segment",
    "SplitSpec",
    "split_series",
    "standardize",
    "synth_generate",
    "WindowSet",
    "make_windows",
]
