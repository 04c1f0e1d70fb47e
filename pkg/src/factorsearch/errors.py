"""Exception hierarchy shared by every module."""

from __future__ import annotations


class FactorSearchError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(FactorSearchError, ValueError):
    """An argument violates an operation's precondition."""


class CapacityError(FactorSearchError):
    """Requested register size exceeds the configured letter cap."""

    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(f"n={n} exceeds the capacity limit of {limit} letters")


class InvalidStateError(FactorSearchError):
    """The state vector cannot be measured (e.g. it is all zeros)."""


class ProjectionMismatchError(FactorSearchError):
    """A projection was requested onto a letter that is not certain.

    ``distribution`` holds the four letter probabilities at ``position``.
    """

    def __init__(self, position: int, letter: int, distribution):
        self.position = position
        self.letter = letter
        self.distribution = tuple(float(p) for p in distribution)
        super().__init__(
            f"letter {letter} at position {position} has probability "
            f"{self.distribution[letter]:.12g}, expected 1"
        )


class RetryExhaustedError(FactorSearchError):
    """The noisy search hit its retry ceiling without finding the target."""

    def __init__(self, restarts: int):
        self.restarts = restarts
        super().__init__(f"gave up after {restarts} restarts")


class NotFoundError(FactorSearchError):
    """A classical search finished without locating the target."""
