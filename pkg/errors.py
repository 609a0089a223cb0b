"""
Exception hierarchy for PolyStab
"""


class StabilityError(Exception):
    """Base class for every error raised by the checker"""


class ParameterError(StabilityError, ValueError):
    """A parameter lies outside its admissible set"""


class DomainError(StabilityError):
    """An operation is undefined for its input"""


class NumericalError(StabilityError):
    """A numerical routine failed its accuracy contract"""


class CapacityError(StabilityError):
    """A computation would exceed a configured size limit"""

    def __init__(self, message, count=None):
        super().__init__(message)
        self.count = count


class FamilyFileError(StabilityError):
    """Malformed family file; line is 1-based when known"""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
