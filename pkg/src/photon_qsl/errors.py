"""Exception hierarchy shared by all modules."""


class PhotonQslError(Exception):
    """Base class for every error raised by the package."""


class ParameterError(PhotonQslError, ValueError):
    """An input lies outside its documented domain."""


class QuadratureError(PhotonQslError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, error_estimate=float("nan")):
        super().__init__(message)
        self.error_estimate = error_estimate


class NumericalDomainError(PhotonQslError, ArithmeticError):
    """An intermediate quantity left its mathematical domain beyond tolerance."""


class CuspError(PhotonQslError, ArithmeticError):
    """|kappa_t| vanishes, so the derivative of the modulus is undefined."""

    def __init__(self, t):
        super().__init__(f"|kappa_t| vanishes at t = {t!r} ps (cusp)")
        self.t = t


class NoTransitionError(PhotonQslError):
    """No Markovian/non-Markovian transition exists for these parameters."""
