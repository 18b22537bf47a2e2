"""Exception hierarchy shared by all modules."""


class FirstIntegralError(Exception):
    """Base class for library errors."""


class ParseError(FirstIntegralError, ValueError):
    """Malformed input text.  Carries 1-based ``line``/``column`` when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)


class DimensionError(FirstIntegralError, ValueError):
    pass


class EmptySystemError(FirstIntegralError, ValueError):
    """Every term cancelled during canonicalization."""


class DegenerateScaleError(FirstIntegralError, ValueError):
    pass


class PreconditionError(FirstIntegralError, ValueError):
    """A closed-form family was evaluated outside its domain."""


class ConstraintError(PreconditionError):
    pass


class BranchError(PreconditionError):
    pass


class UnsupportedArrayError(FirstIntegralError):
    """Abnormal or non-connected array where a normal connected one is required."""


class ContradictionError(FirstIntegralError):
    """An internal consistency check failed (should be unreachable)."""


class SearchLimitError(FirstIntegralError, ValueError):
    pass


class DomainError(FirstIntegralError, ArithmeticError):
    """Real power or logarithm undefined at a sample point."""


class IntegrationError(FirstIntegralError, ArithmeticError):
    """Non-finite state during numerical integration."""
