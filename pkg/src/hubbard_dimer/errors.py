class DomainError(ValueError):
    """Input outside the domain an operation is defined on."""


class NumericError(ArithmeticError):
    """A numerical routine failed to reach its accuracy contract."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class SearchFailure(RuntimeError):
    """A bracketing search found no sign change in its allowed range."""
