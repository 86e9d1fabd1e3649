"""Exception hierarchy shared by all modules.

Every library error derives from :class:`CyclesError`; input-shaped errors also
derive from :class:`ValueError` so generic callers can catch them as such.
"""

from __future__ import annotations


class CyclesError(Exception):
    """Base class for numerical and domain errors raised by the toolkit."""


class InvalidVelocityError(CyclesError, ValueError):
    """Boost velocity with ``|beta| >= 1``."""


class DispersionError(CyclesError, ValueError):
    """Four-momentum (or period) inconsistent with the stated mass shell."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class InvalidPeriodError(CyclesError, ValueError):
    """Period four-vector that is null or spacelike."""


class InfinitePeriodError(CyclesError, ValueError):
    """Massless state at rest: the recurrence has no finite period."""


class DomainError(CyclesError, ValueError):
    """Argument outside the region where an operation is defined."""


class SingularityError(DomainError):
    """Evaluation at the source of a singular potential."""


class LinearizationError(DomainError):
    """Modulation too strong for the first-order (weak-field) formulas."""


class CommensurabilityError(CyclesError, ValueError):
    """Sampling window is not an integer number of spatial periods."""


class NoTurningPointError(CyclesError, ValueError):
    """No classically allowed region for the requested energy."""


class UnresolvedLevelError(CyclesError):
    """Root bracketing for a quantization condition failed."""

    def __init__(self, message: str, bracket: tuple[float, float]):
        super().__init__(f"{message}; attempted energy range [{bracket[0]!r}, {bracket[1]!r}]")
        self.bracket = bracket


class TruncationError(CyclesError):
    """Series truncation tail exceeds the certification budget."""

    def __init__(self, message: str, tail: float):
        super().__init__(f"{message} (tail bound={tail:.3e})")
        self.tail = tail


class UndersampledLoopError(CyclesError, ValueError):
    """Loop sampling too coarse to resolve the phase or potential."""


class StokesInconsistencyError(CyclesError):
    """Winding count and quadrature of the phase gradient disagree."""
