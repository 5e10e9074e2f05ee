"""Exception types shared across the package."""


class TradePathError(Exception):
    """Base class for every error raised by this package."""


class MissingColumn(TradePathError):
    """A configured tape column is absent from the CSV header."""


class UnparsableRow(TradePathError):
    """A tape row failed validation; carries the 1-based line number."""

    def __init__(self, line_number: int, reason: str):
        self.line_number = line_number
        self.reason = reason
        super().__init__(f"line {line_number}: {reason}")


class EmptyTape(TradePathError):
    """The tape contains no data rows."""


class TraderNotFound(TradePathError):
    """The requested broker id appears in no trade record."""


class TooFewObservations(TradePathError):
    """Not enough observations to form the requested quantity."""


class BinLargerThanSession(TradePathError):
    """A resampling bin exceeds the session length."""


class ZeroVolume(TradePathError):
    """Average bin volume is zero; impact coefficients are undefined."""


class EmptyInput(TradePathError):
    """An estimator received an empty input series."""


class RiccatiBlowup(TradePathError):
    """Backward integration of the feedback-slope ODE diverged in finite time."""
