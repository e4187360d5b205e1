"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``DomainError`` -> 1, ``BudgetExceeded`` -> 3.
"""


class MatroidAutError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MatroidAutError, ValueError):
    """Input is well-formed but mathematically unacceptable."""


class AxiomViolation(DomainError):
    """A family of r-sets fails the basis exchange axiom.

    ``witness`` holds the failing ``(B1, B2, x)`` triple as (mask, mask, element).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotInvariantError(DomainError):
    """A family expected to be invariant under a permutation is not."""


class ClosureNotStable(DomainError):
    """Closing a seed family under a permutation produced adjacent members."""


class PromiseViolation(DomainError):
    """Minors handed to the reconstruction do not come from a symmetric matroid."""


class BudgetExceeded(MatroidAutError):
    """A computation was refused because it exceeds a configured resource budget."""
