"""Exception types shared across the package.

Every failure mode that callers are expected to handle gets its own class so
CLI exit codes and tests can discriminate without string matching.
"""

from __future__ import annotations


class LacunaError(Exception):
    """Base class for all package-specific errors."""


class ParseError(LacunaError):
    """Malformed polynomial text. Carries the offending position when known."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnsupportedMode(LacunaError):
    """Operation requested in a numeric mode it does not support."""


class NotDivisible(LacunaError):
    """Polynomial division left a remainder beyond the allowed tolerance."""


class QuadratureBudgetExceeded(LacunaError):
    """Adaptive quadrature hit its panel budget before reaching the tolerance."""


class IllConditionedZeros(LacunaError):
    """Zero clustering could not certify locations/multiplicities."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NotHermitianSymmetric(LacunaError):
    """Coefficients are not conjugate-symmetric about the given half degree."""


class RankIndeterminate(LacunaError):
    """Float-mode singular value spectrum has no safe gap at the cut."""

    def __init__(self, message: str, gap: float | None = None, singular_values=None):
        super().__init__(message)
        self.gap = gap
        self.singular_values = singular_values


class SolverStalled(LacunaError):
    """Alternating projections neither converged nor certifiably plateaued."""


class FacialMismatch(LacunaError):
    """Greedy cone search disagrees with the facial certificate; solver failure."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class WitnessValidationFailed(LacunaError):
    """An emitted witness failed one of its mandatory checks; internal bug."""


class SpectrumViolation(LacunaError):
    """Input polynomial has energy on a forbidden frequency."""


class AuditMismatch(LacunaError):
    """A shortcut verdict disagrees with the full criterion; internal bug."""
