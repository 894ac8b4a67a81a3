class AnalyticError(Exception):
    """Base class for every error the library raises on purpose"""

    exit_code = 1


class ConfigError(AnalyticError, ValueError):
    """Raised when parameters or configuration are invalid"""

    exit_code = 2


class ParseError(ConfigError):
    """Raised when a zero table cannot be parsed"""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OrderingError(ParseError):
    """Raised when zero ordinates are not strictly ascending"""


class BetaRangeError(ParseError):
    """Raised when a real part lies outside (0, 1)"""


class UnknownSuiteError(ConfigError):
    """Raised when a verification suite name is not known"""


class CapacityError(AnalyticError):
    """Raised when a table or a budget is too small for the request"""

    exit_code = 3


class TermBudgetError(CapacityError):
    """Raised when a zero sum would exceed the configured term budget"""


class NumericSentinelError(AnalyticError):
    """Raised when a computation leaves the float64 range"""

    exit_code = 4


class OverflowSentinelError(NumericSentinelError):
    """Raised when a log-modulus exceeds the overflow threshold"""


class PoleError(NumericSentinelError):
    """Raised when the gamma function is evaluated at a pole"""


class CacheFormatError(AnalyticError):
    """Raised when a cache file has the wrong magic or a truncated payload"""
