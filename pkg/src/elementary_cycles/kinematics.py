"""Four-vectors, Lorentz boosts and the momentum/period duality.

Natural units (hbar = c = 1) and metric signature (+, -, -, -) throughout.
A free particle of mass ``m`` and four-momentum ``k`` carries the period
four-vector ``T = 2*pi*k/m**2``, the unique vector parallel to ``k`` with
``k_mu T^mu = 2*pi`` and ``m**2 T_mu T^mu = (2*pi)**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import constants

from .errors import DispersionError, DomainError, InvalidPeriodError, InvalidVelocityError

TWO_PI = 2.0 * math.pi

CONTRAVARIANT = "contravariant"
COVARIANT = "covariant"

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

#: Relative tolerance for accepting user-supplied on-shell momenta.
ON_SHELL_TOL = 1e-9

HBAR_SI = constants.hbar
C_SI = constants.c


@dataclass(frozen=True)
class FourVector:
    """Spacetime or energy-momentum quadruple with an index-position tag."""

    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    index: str = CONTRAVARIANT

    def __post_init__(self):
        if self.index not in (CONTRAVARIANT, COVARIANT):
            raise ValueError(f"unknown index position {self.index!r}")

    @classmethod
    def from_array(cls, values: Sequence[float], index: str = CONTRAVARIANT) -> "FourVector":
        t, x, y, z = (float(v) for v in values)
        return cls(t, x, y, z, index)

    def to_array(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z], dtype=float)

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def lower(self) -> "FourVector":
        if self.index == COVARIANT:
            return self
        return FourVector(self.t, -self.x, -self.y, -self.z, COVARIANT)

    def raise_index(self) -> "FourVector":
        if self.index == CONTRAVARIANT:
            return self
        return FourVector(self.t, -self.x, -self.y, -self.z, CONTRAVARIANT)

    def dot(self, other: "FourVector") -> float:
        """Minkowski contraction, honouring both index positions."""
        a = self.to_array()
        b = other.to_array()
        if self.index != other.index:
            return float(a @ b)
        return float(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3])

    def norm2(self) -> float:
        return self.dot(self)

    def scaled(self, factor: float) -> "FourVector":
        return FourVector(factor * self.t, factor * self.x, factor * self.y, factor * self.z, self.index)

    def __add__(self, other: "FourVector") -> "FourVector":
        if not isinstance(other, FourVector):
            return NotImplemented
        if other.index != self.index:
            raise ValueError("cannot add vectors with different index positions")
        return FourVector.from_array(self.to_array() + other.to_array(), self.index)

    def __sub__(self, other: "FourVector") -> "FourVector":
        return self + other.scaled(-1.0)

    def __neg__(self) -> "FourVector":
        return self.scaled(-1.0)

    def __mul__(self, factor: float) -> "FourVector":
        return self.scaled(float(factor))

    __rmul__ = __mul__


@dataclass(frozen=True)
class BoostParameters:
    """Boost velocity ``beta`` (in units of c); ``gamma`` derived."""

    beta: tuple[float, float, float]
    gamma: float = field(init=False)

    def __init__(self, beta: Sequence[float]):
        b = tuple(float(v) for v in beta)
        if len(b) != 3:
            raise ValueError("beta must have three components")
        b2 = b[0] ** 2 + b[1] ** 2 + b[2] ** 2
        if not b2 < 1.0:
            raise InvalidVelocityError(f"|beta| = {math.sqrt(b2)!r} must be < 1")
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "gamma", 1.0 / math.sqrt(1.0 - b2))

    @property
    def speed(self) -> float:
        return math.sqrt(sum(v * v for v in self.beta))


def boost_matrix(b: BoostParameters) -> np.ndarray:
    """Matrix ``L^mu_nu`` taking a rest-frame contravariant vector to the frame
    in which the rest object moves with velocity ``beta``."""
    beta = np.asarray(b.beta)
    g = b.gamma
    b2 = float(beta @ beta)
    L = np.empty((4, 4))
    L[0, 0] = g
    L[0, 1:] = g * beta
    L[1:, 0] = g * beta
    if b2 == 0.0:
        L[1:, 1:] = np.eye(3)
    else:
        L[1:, 1:] = np.eye(3) + (g - 1.0) * np.outer(beta, beta) / b2
    return L


def boost(v: FourVector, b: BoostParameters) -> FourVector:
    """Apply the Lorentz boost ``b`` to ``v`` respecting its index position.

    Covariant vectors are transformed by raising, boosting and lowering, which
    is the inverse-transpose action and keeps every contraction invariant.
    """
    return _apply_boost(v, boost_matrix(b))


def _apply_boost(v: FourVector, L: np.ndarray) -> FourVector:
    up = v.raise_index()
    out = FourVector.from_array(L @ up.to_array(), CONTRAVARIANT)
    return out.lower() if v.index == COVARIANT else out


def compose_collinear(beta1: float, beta2: float) -> float:
    """Relativistic velocity addition along a common axis."""
    return (beta1 + beta2) / (1.0 + beta1 * beta2)


def _check_on_shell(mass: float, k: FourVector) -> None:
    residual = k.norm2() - mass * mass
    scale = max(1.0, k.t * k.t)
    if abs(residual) > ON_SHELL_TOL * scale:
        raise DispersionError("four-momentum is off the mass shell k.k = m^2", residual)


def period_from_momentum(mass: float, k: FourVector) -> FourVector:
    """Period four-vector ``T^mu = 2*pi*k^mu/m**2`` of an on-shell momentum."""
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}")
    _check_on_shell(mass, k)
    return k.raise_index().scaled(TWO_PI / (mass * mass))


def momentum_from_period(mass: float, T: FourVector) -> FourVector:
    """Contravariant four-momentum ``k^mu = 2*pi*T^mu/(T.T)`` for a timelike period.

    ``mass`` must agree with the period's own Compton scale
    ``2*pi/sqrt(T.T)`` to the on-shell tolerance.
    """
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass!r}")
    T = T.raise_index()
    tt = T.norm2()
    if not (tt > 0 and T.t > 0):
        raise InvalidPeriodError(f"period must be future timelike, got T.T = {tt!r}")
    k = T.scaled(TWO_PI / tt)
    _check_on_shell(mass, k)
    return k


@dataclass(frozen=True)
class PeriodState:
    """Mass, contravariant four-momentum and period of a free particle."""

    mass: float
    momentum: FourVector
    period: FourVector

    @classmethod
    def at_rest(cls, mass: float) -> "PeriodState":
        return cls.from_momentum(mass, FourVector(mass, 0.0, 0.0, 0.0))

    @classmethod
    def from_momentum(cls, mass: float, k: FourVector) -> "PeriodState":
        k = k.raise_index()
        return cls(mass, k, period_from_momentum(mass, k))

    @classmethod
    def from_spatial_momentum(cls, mass: float, p: Sequence[float]) -> "PeriodState":
        px, py, pz = (float(v) for v in p)
        omega = math.sqrt(mass * mass + px * px + py * py + pz * pz)
        return cls.from_momentum(mass, FourVector(omega, px, py, pz))

    def boosted(self, b: BoostParameters) -> "PeriodState":
        L = boost_matrix(b)
        return PeriodState(self.mass, _apply_boost(self.momentum, L), _apply_boost(self.period, L))

    @property
    def compton_period(self) -> float:
        return TWO_PI / self.mass


def phase_harmony_residual(s: PeriodState) -> float:
    """``|k_mu T^mu - 2*pi|``; zero for a consistent state."""
    return abs(s.momentum.dot(s.period) - TWO_PI)


def dispersion_residual(s: PeriodState) -> float:
    """``|m**2 T_mu T^mu - (2*pi)**2|``."""
    return abs(s.mass ** 2 * s.period.norm2() - TWO_PI ** 2)


def si_compton_time(mass_si: float) -> float:
    """Compton period ``2*pi*hbar/(m c^2)`` in seconds for a mass in kg."""
    if not mass_si > 0:
        raise DomainError(f"mass must be positive, got {mass_si!r}")
    return TWO_PI * HBAR_SI / (mass_si * C_SI ** 2)


def si_mass_from_compton_time(period_s: float) -> float:
    """Inverse of :func:`si_compton_time`: mass in kg from a period in seconds."""
    if not period_s > 0:
        raise DomainError(f"period must be positive, got {period_s!r}")
    return TWO_PI * HBAR_SI / (period_s * C_SI ** 2)
