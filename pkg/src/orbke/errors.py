"""Error taxonomy shared across modules.

Two families matter to callers (and to the CLI exit-code policy):
InputError for rejected input, ResourceLimitExceeded for aborted work.
Everything else is a plain bug and should surface as-is.
"""

from __future__ import annotations


class OrbkeError(Exception):
    """Base class for all package errors."""


class InputError(OrbkeError, ValueError):
    """Input violates a documented precondition.  CLI exit code 1."""


class WrongLength(InputError):
    """Ramification tuple does not have n+2 entries."""


class OrderBelowMinimum(InputError):
    """A ramification index is below the configured minimum order."""


class PairwiseCoprimeViolation(InputError):
    """Two ramification indices share a prime factor."""


class NotFanoOrbifold(InputError):
    """delta outside (0,1): K_X + Delta is not negative (or Delta empty)."""


class InvalidQuadricPencil(InputError):
    """A quadric-pencil eigenvalue is zero; the pencil is degenerate."""


class ThresholdOutsideGrid(OrbkeError):
    """Every probed lambda sits on one side of the integrability threshold.

    `direction` is "above" when the threshold lies above the grid (all
    slopes flat) and "below" when it lies below (all slopes supercritical).
    """

    def __init__(self, direction: str, message: str):
        super().__init__(message)
        self.direction = direction


class ResourceLimitExceeded(OrbkeError, RuntimeError):
    """Work aborted by a configured cap.  CLI exit code 2."""


class NodeBudgetExceeded(ResourceLimitExceeded):
    """Enumeration hit the node cap; carries the partial result."""

    def __init__(self, message: str, partial):
        super().__init__(message)
        self.partial = partial


class SearchSpaceTooLarge(ResourceLimitExceeded):
    """Brute-force scan would exceed the raw-candidate guard."""
