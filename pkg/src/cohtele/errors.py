"""Exception types raised across the package."""


class CohteleError(Exception):
    """Base class for all package errors."""


class DimensionError(CohteleError, ValueError):
    """Operand shapes or subsystem dimensions do not fit together."""


class ValidationError(CohteleError, ValueError):
    """A matrix fails a Hermiticity, positivity, normalization or range check."""


class NotCompletelyPositiveError(ValidationError):
    """A Choi matrix has an eigenvalue below the positivity tolerance."""

    def __init__(self, min_eigenvalue, message=None):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(
            message
            or f"Choi matrix is not positive semidefinite (min eigenvalue {self.min_eigenvalue:.3e}); "
            "the map is not completely positive"
        )


class DegenerateOutcomeError(CohteleError):
    """The requested measurement outcome has (numerically) zero probability."""

    def __init__(self, probability):
        self.probability = float(probability)
        super().__init__(
            f"outcome probability {self.probability:.3e} is below 1e-12; "
            "the conditional state is undefined"
        )
