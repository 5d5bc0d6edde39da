"""Package-specific exception types."""


class ConvergenceError(RuntimeError):
    """A truncated expansion or quadrature failed its convergence certificate."""


class LossOfOrthogonalityError(RuntimeError):
    """Basis construction exceeded its Gram-deviation budget."""
