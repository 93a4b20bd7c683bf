"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class LatticeError(Exception):
    """Base class for every error raised by this package."""


class LatticeStructureError(LatticeError, ValueError):
    """Tables are malformed: wrong shape, index out of range, duplicate labels."""


class LatticeAxiomError(LatticeError):
    """Tables are well formed but violate a multiplicative-lattice axiom."""

    def __init__(self, report, labels=None) -> None:
        self.report = report
        self.labels = labels
        super().__init__(f"not a multiplicative lattice: {report.describe(labels)}")


class LatticeInvariantError(LatticeError, AssertionError):
    """An internal cross-check disagreed; indicates a bug, not bad input."""


class ImproperElementError(LatticeError, ValueError):
    """A predicate that is only defined for proper elements got the top."""


class CapExceededError(LatticeError, ValueError):
    """A construction or check would exceed a configured size/degree cap."""


class MLATFormatError(LatticeError, ValueError):
    """An MLAT file could not be parsed."""

    def __init__(self, message: str, position: int | None = None) -> None:
        self.position = position
        if position is not None:
            message = f"{message} (at byte {position})"
        super().__init__(message)
