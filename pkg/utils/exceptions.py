"""Custom exceptions for sir-exact."""

from typing import Any, Dict, Optional


class SirExactError(Exception):
    """Base exception for all sir-exact errors."""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        super().__init__(self.message)


class ValidationError(SirExactError):
    """Input validation failed."""

    pass


class ConfigurationError(SirExactError):
    """Configuration file missing or malformed."""

    pass


class DegenerateStateError(SirExactError):
    """A rate or update denominator vanished (x + y = 0)."""

    pass


class ParameterError(SirExactError):
    """Parameters outside the domain of a closed-form solution (e.g. b = c for the closed form)."""

    pass


class SchemeError(SirExactError):
    """A stepping scheme failed or was used outside its contract."""

    pass


class QuadratureError(SirExactError):
    """Adaptive quadrature exhausted its subdivision budget."""

    pass


class ConvergenceError(SirExactError):
    """An iterative limit did not settle within its iteration budget."""

    pass
