"""Exception hierarchy shared across the package."""


class PolypermError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PolypermError, ValueError):
    """An argument is malformed (bad index, non-bijective permutation, ...)."""


class ValidationError(PolypermError, ValueError):
    """An object fails its domain validation (not latin, not polystochastic, ...)."""


class CapacityError(PolypermError):
    """A request exceeds a configured size guard and was refused."""


class LemmaViolationError(PolypermError):
    """A guaranteed extension step failed; indicates a bug or invalid input."""


class TheoremViolationError(PolypermError):
    """No positive diagonal was found where one must exist; test-harness hook."""
