"""Exception types shared across the package."""


class CSVParseError(ValueError):
    """Raised when a data file cannot be parsed; carries the offending row."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class UndefinedMetricError(RuntimeError):
    """Raised when a metric has no valid value (no comparable pairs, empty cohort)."""


class TrainingDivergenceError(RuntimeError):
    """Raised when the optimizer produces non-finite losses or gradients."""

    def __init__(self, message, epoch=None, batch=None, trace=None):
        super().__init__(message)
        self.epoch = epoch
        self.batch = batch
        self.trace = trace


class NumericError(RuntimeError):
    """Raised when a numeric routine fails (rank deficiency, non-convergence)."""
