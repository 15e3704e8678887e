"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`FracEntropyError`, so callers (the CLI in particular) can separate
domain problems from numerical failures.
"""


__all__ = [
    "FracEntropyError",
    "DomainError",
    "NumericalError",
    "InvalidAlpha",
    "InvalidModel",
    "InvalidScale",
    "OutOfDomain",
    "NoClosedForm",
    "MissingPdf",
    "MissingQuantile",
    "ZeroMass",
    "ZeroDenominator",
    "UnboundedSupport",
    "PreconditionUnmet",
    "EmptySample",
    "SampleTooSmall",
    "NonMonotoneG",
    "DivergentIntegral",
    "IntegrationFailure",
    "IdentityViolation",
]


class FracEntropyError(Exception):
    """Base class for all package errors."""


class DomainError(FracEntropyError, ValueError):
    """Inputs outside the mathematical domain of an operation."""


class NumericalError(FracEntropyError, ArithmeticError):
    """A numerical procedure failed to deliver the requested accuracy."""


class InvalidAlpha(DomainError):
    pass


class InvalidModel(DomainError):
    pass


class InvalidScale(DomainError):
    pass


class OutOfDomain(DomainError):
    pass


class NoClosedForm(DomainError):
    """The distribution has no closed-form expression for the measure."""


class MissingPdf(DomainError):
    pass


class MissingQuantile(DomainError):
    pass


class ZeroMass(DomainError):
    """Conditioning event has zero probability (F(t) = 0 or F(t) = 1)."""


class ZeroDenominator(DomainError):
    pass


class UnboundedSupport(DomainError):
    pass


class PreconditionUnmet(DomainError):
    pass


class EmptySample(DomainError):
    pass


class SampleTooSmall(DomainError):
    pass


class NonMonotoneG(DomainError):
    pass


class DivergentIntegral(NumericalError):
    pass


class IntegrationFailure(NumericalError):
    pass


class IdentityViolation(NumericalError):
    """An identity that should hold to tolerance produced a large residual."""
