"""Exception types shared across the package."""


class MoebiusHarvestError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(MoebiusHarvestError, ValueError):
    """A spec, config file, or call argument violates a documented constraint."""


class ValidationError(MoebiusHarvestError, ValueError):
    """An input fails a mathematical precondition (e.g. a non-Hermitian matrix)."""


class NumericalError(MoebiusHarvestError, RuntimeError):
    """An iterative scheme failed to converge or produced non-finite values."""


class DegenerateInputError(ConfigurationError):
    """A resonance denominator is too small for the perturbative formulas."""


class DivergentIntegralError(MoebiusHarvestError, ValueError):
    """A closed-form time integral does not converge (non-decaying mode)."""


class DomainError(MoebiusHarvestError, ValueError):
    """Data handed to an analysis routine is outside its mathematical domain."""
