"""Harmonic towers on a compact dimension and the fields built from them.

A periodic (or anti-periodic) boundary condition over the period four-vector
``T`` admits only the harmonics ``k_n = h_n * k`` with ``h_n = n`` (PBC) or
``h_n = n + 1/2`` (anti-PBC), ``n = 1, 2, ...``.  The zero mode is not part of
the tower.

Spatial integrals run along the direction of the base momentum over a window
holding an integer number of wavelengths ``2*pi/|k|``, sampled with the
periodic trapezoid rule.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import CommensurabilityError, DomainError, InfinitePeriodError
from .kinematics import FourVector, PeriodState

#: Relative slack when deciding whether a window holds a whole number of periods.
COMMENSURABILITY_TOL = 1e-9

#: Boundary term magnitude above which a non-periodic test function is reported.
BOUNDARY_WARN_TOL = 1e-10


class BoundaryCondition(enum.Enum):
    PBC = "PBC"
    ANTI_PBC = "AntiPBC"

    @property
    def offset(self) -> float:
        return 0.0 if self is BoundaryCondition.PBC else 0.5

    @property
    def sign(self) -> int:
        """Factor picked up by the field after one full period."""
        return 1 if self is BoundaryCondition.PBC else -1

    @classmethod
    def parse(cls, value: "str | BoundaryCondition") -> "BoundaryCondition":
        if isinstance(value, cls):
            return value
        key = str(value).replace("-", "").replace("_", "").lower()
        for bc in cls:
            if bc.value.lower() == key:
                return bc
        raise ValueError(f"unknown boundary condition {value!r}; expected PBC or AntiPBC")


def harmonic_numbers(n_max: int, bc: BoundaryCondition) -> np.ndarray:
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    return np.arange(1, n_max + 1) + bc.offset


@dataclass(frozen=True)
class SpectrumResult:
    """Energies and momenta of a harmonic tower (also used for KK towers)."""

    n: np.ndarray
    harmonic: np.ndarray
    omega: np.ndarray
    momenta: np.ndarray
    bc: BoundaryCondition

    def rows(self) -> list[tuple]:
        return [
            (int(n), float(w), float(k[0]), float(k[1]), float(k[2]))
            for n, w, k in zip(self.n, self.omega, self.momenta)
        ]

    csv_header = ("n", "omega", "kx", "ky", "kz")


def harmonic_spectrum(
    mass: float,
    momentum: Sequence[float],
    n_max: int,
    bc: "BoundaryCondition | str" = BoundaryCondition.PBC,
) -> SpectrumResult:
    """Tower ``omega_n = h_n * sqrt(|k|**2 + m**2)``, ``k_n = h_n * k``."""
    bc = BoundaryCondition.parse(bc)
    k = np.asarray(momentum, dtype=float).reshape(3)
    if mass < 0:
        raise DomainError(f"mass must be non-negative, got {mass!r}")
    if mass == 0 and not np.any(k):
        raise InfinitePeriodError("massless state at rest has an infinite period")
    h = harmonic_numbers(n_max, bc)
    fundamental = math.sqrt(float(k @ k) + mass * mass)
    return SpectrumResult(
        n=np.arange(1, n_max + 1),
        harmonic=h,
        omega=h * fundamental,
        momenta=np.outer(h, k),
        bc=bc,
    )


@dataclass(frozen=True)
class HarmonicField:
    """Truncated superposition ``sum_n N c_n exp(-i h_n k_mu x^mu)``.

    ``coefficients[j]`` multiplies harmonic ``j + 1``; they are the
    (already conjugated) population amplitudes of the modes.
    """

    base_state: PeriodState
    coefficients: np.ndarray
    bc: BoundaryCondition = BoundaryCondition.PBC
    normalization: float = 1.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=complex))
        if c.ndim != 1 or c.size < 1:
            raise ValueError("coefficients must be a non-empty 1-D sequence")
        if not self.normalization > 0:
            raise ValueError("normalization must be positive")
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "bc", BoundaryCondition.parse(self.bc))

    @property
    def truncation(self) -> int:
        return self.coefficients.size

    @property
    def harmonics(self) -> np.ndarray:
        return harmonic_numbers(self.truncation, self.bc)

    def mode(self, n: int) -> "HarmonicField":
        """Single harmonic ``n`` with unit amplitude."""
        if not 1 <= n:
            raise ValueError(f"mode index must be >= 1, got {n}")
        c = np.zeros(n, dtype=complex)
        c[n - 1] = 1.0
        return HarmonicField(self.base_state, c, self.bc, self.normalization)

    def mode_phases(self, points: np.ndarray) -> np.ndarray:
        """``k_mu x^mu`` of the fundamental at each contravariant point, shape (P,)."""
        k_cov = self.base_state.momentum.lower().to_array()
        return np.asarray(points, dtype=float).reshape(-1, 4) @ k_cov

    @property
    def spatial_wavenumber(self) -> float:
        return float(np.linalg.norm(self.base_state.momentum.spatial))

    @property
    def spatial_period(self) -> float:
        q = self.spatial_wavenumber
        if q == 0.0:
            raise CommensurabilityError("state at rest has no spatial period")
        return 2.0 * math.pi / q

    @property
    def direction(self) -> np.ndarray:
        p = self.base_state.momentum.spatial
        return p / np.linalg.norm(p)


def synthesize(field: HarmonicField, x: "FourVector | np.ndarray") -> "complex | np.ndarray":
    """Evaluate the field at one contravariant point or an array of shape (..., 4)."""
    if isinstance(x, FourVector):
        pts = x.raise_index().to_array()[None, :]
        scalar = True
    else:
        arr = np.asarray(x, dtype=float)
        scalar = arr.ndim == 1
        pts = arr.reshape(-1, 4)
    phase = np.outer(field.mode_phases(pts), field.harmonics)
    values = field.normalization * (np.exp(-1j * phase) @ field.coefficients)
    if scalar:
        return complex(values[0])
    return values.reshape(np.asarray(x).shape[:-1])


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic sampling of ``[0, length)`` along the field's momentum."""

    length: float
    points: int
    t: float = 0.0

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("grid length must be positive")
        if self.points < 2:
            raise ValueError("grid needs at least two points")

    @classmethod
    def over_periods(cls, field: HarmonicField, periods: int, points: int, t: float = 0.0) -> "SpatialGrid":
        return cls(periods * field.spatial_period, points, t)

    @property
    def coordinates(self) -> np.ndarray:
        return self.length * np.arange(self.points) / self.points

    def spacetime_points(self, field: HarmonicField) -> np.ndarray:
        s = self.coordinates
        pts = np.empty((self.points, 4))
        pts[:, 0] = self.t
        pts[:, 1:] = np.outer(s, field.direction)
        return pts

    def check_commensurate(self, field: HarmonicField) -> int:
        ratio = self.length / field.spatial_period
        periods = round(ratio)
        if periods < 1 or abs(ratio - periods) > COMMENSURABILITY_TOL * max(1.0, ratio):
            raise CommensurabilityError(
                f"grid length covers {ratio!r} spatial periods; an integer number is required"
            )
        return periods


def _sample(field: HarmonicField, grid: SpatialGrid) -> np.ndarray:
    grid.check_commensurate(field)
    return synthesize(field, grid.spacetime_points(field))


def _same_base(f: HarmonicField, g: HarmonicField) -> None:
    if f.base_state != g.base_state or f.bc != g.bc:
        raise ValueError("fields must share base state and boundary condition")


def inner_product(f: HarmonicField, g: HarmonicField, grid: SpatialGrid) -> complex:
    """Window-averaged overlap ``int dx/V  g*(x) f(x)`` by periodic trapezoid."""
    _same_base(f, g)
    return complex(np.mean(np.conj(_sample(g, grid)) * _sample(f, grid)))


def norm2(field: HarmonicField, grid: SpatialGrid) -> float:
    return inner_product(field, field, grid).real


def apply_momentum(field: HarmonicField) -> HarmonicField:
    """Spatial momentum along the base direction, applied mode by mode."""
    q = field.harmonics * field.spatial_wavenumber
    return HarmonicField(field.base_state, field.coefficients * q, field.bc, field.normalization)


def spectral_derivative(samples: np.ndarray, length: float) -> np.ndarray:
    """Derivative of periodic samples on ``[0, length)`` via FFT."""
    m = samples.size
    wavenumbers = 2.0 * math.pi * np.fft.fftfreq(m, d=length / m)
    if m % 2 == 0:
        wavenumbers[m // 2] = 0.0
    return np.fft.ifft(1j * wavenumbers * np.fft.fft(samples)).real


class BoundaryTermWarning(UserWarning):
    """Test function is not periodic over the window; integration by parts leaks."""


class CommutatorExpectation(NamedTuple):
    lhs: complex
    rhs: complex
    boundary_residual: float


def commutator_expectation(
    F: Callable[[np.ndarray], np.ndarray],
    field: HarmonicField,
    grid: SpatialGrid,
) -> CommutatorExpectation:
    """Compare ``<Phi|[F, P]|Phi>`` with ``i <Phi|dF/dx|Phi>``.

    ``F`` is a real function of the coordinate along the momentum direction.
    The commutator side uses the spectral momentum of the modes (``P`` is
    Hermitian on the window, so ``<Phi|P F Phi> = <P Phi|F Phi>``); the other
    side differentiates the sampled ``F`` by FFT.
    """
    phi = _sample(field, grid)
    p_phi = _sample(apply_momentum(field), grid)
    s = grid.coordinates
    f = np.asarray(F(s), dtype=float)

    lhs = np.mean(np.conj(phi) * f * p_phi) - np.mean(np.conj(p_phi) * f * phi)
    df = spectral_derivative(f, grid.length)
    rhs = 1j * np.mean(df * np.abs(phi) ** 2)

    jump = float(F(np.array([grid.length]))[0] - F(np.array([0.0]))[0])
    boundary = abs(jump) * float(np.max(np.abs(phi) ** 2))
    if boundary > BOUNDARY_WARN_TOL:
        warnings.warn(
            f"test function is not periodic over the window; boundary term {boundary:.3e}",
            BoundaryTermWarning,
            stacklevel=2,
        )
    return CommutatorExpectation(complex(lhs), complex(rhs), boundary)
