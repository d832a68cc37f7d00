"""
Exception hierarchy shared by the engine modules and the command line
"""


class EpsilonError(Exception):
    """Base class for all errors raised by the epsilon-factor engine"""


class JobSpecError(EpsilonError, ValueError):
    """Invalid or unparsable job input; the message names the offending field"""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class PrecisionError(EpsilonError, ValueError):
    """An element is not known to the precision an evaluation needs"""


class UnsupportedError(EpsilonError, ValueError):
    """Input outside the implemented slice (ramified extensions, l = p, ...)"""


class InvariantViolation(EpsilonError, RuntimeError):
    """A property guaranteed by the theory failed; always an implementation bug"""
