"""Typed exceptions shared across the package."""


class CreditLabError(Exception):
    """Base class for all package errors."""


class DataError(CreditLabError):
    """Malformed dataset file, schema violation, or impossible recode."""


class ConfigError(CreditLabError):
    """Invalid run configuration (unknown keys, missing fields, bad values)."""


class FitError(CreditLabError):
    """A learner cannot be fit (degenerate labels, non-finite features)."""


class UndefinedMetricError(CreditLabError):
    """A metric is undefined on the given inputs (e.g. single-class AUC)."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
