class ArborealError(Exception):
    """Base class for errors raised by arboreal."""


class InputError(ArborealError, ValueError):
    """Malformed user input (polynomial text, option value)."""


class ComputationError(ArborealError, ValueError):
    """A well-formed input violates a mathematical precondition of an operation."""


class IrrationalCriticalPointError(ComputationError):
    """f' does not split over the rationals."""


class InseparableError(ComputationError):
    """A polynomial that must be separable has a repeated root."""


class LeadingCoefficientVanishesError(ComputationError):
    """A specialization sends the leading coefficient to zero."""
