"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so new error sites should
raise the most specific class that applies.
"""


class MixLinearError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(MixLinearError, ValueError):
    """Invalid or inconsistent configuration (bad shapes, flags, presets)."""


class DataError(MixLinearError, ValueError):
    """Problem with an input dataset: unreadable file, bad cell, bad layout."""


class NumericError(MixLinearError, ArithmeticError):
    """Non-finite values where finite ones are required (e.g. NaN loss)."""


class CheckpointError(MixLinearError, ValueError):
    """Malformed or incompatible parameter checkpoint."""
