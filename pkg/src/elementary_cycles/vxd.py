"""Virtual extra dimension: compact-dimension towers and the freeze-out scheme.

A mode tower on a compact dimension of length ``Lambda`` is returned as a
:class:`~elementary_cycles.spectrum.SpectrumResult`, the same type as the
energy tower of a particle at rest, so the two are one object rather than
two particle species.

In the freeze-out scheme the four-momentum decays conformally,
``k(s) = exp(-K s) k``, the periods grow by ``exp(K s)``, and the dual
five-dimensional interval is ``dS^2 = exp(-2 K s) dx.dx - ds^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._io import atomic_write_csv
from .errors import DispersionError, DomainError
from .kinematics import CONTRAVARIANT, FourVector, si_mass_from_compton_time
from .spectrum import BoundaryCondition, SpectrumResult

NULL_TOL = 1e-3
ENERGY_NORMALIZATION = "E(s) = 2*pi/T(s) = 2*pi*K*exp(-K*s); raw_energy = exp(-K*s)*k0"


@dataclass(frozen=True)
class CompactDimensionSpec:
    length: float
    bc: BoundaryCondition = BoundaryCondition.PBC

    def __post_init__(self):
        if not (self.length > 0 and math.isfinite(self.length)):
            raise DomainError(f"compactification length must be positive and finite, got {self.length!r}")
        object.__setattr__(self, "bc", BoundaryCondition.parse(self.bc))

    @property
    def fundamental_mass(self) -> float:
        return 2.0 * math.pi / self.length


def kk_tower(spec: CompactDimensionSpec, n_max: int) -> SpectrumResult:
    """Masses ``2 pi (n + offset) / Lambda`` for ``n = 1..n_max``."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    n = np.arange(1, n_max + 1)
    shift = 0.5 if spec.bc is BoundaryCondition.ANTI_PBC else 0.0
    modes = n + shift
    masses = np.array([2.0 * math.pi * float(h) / spec.length for h in modes])
    return SpectrumResult(n=n, harmonic=modes, omega=masses, momenta=np.zeros((n_max, 3)), bc=spec.bc)


def effective_mass_from_compactification(circumference: float) -> float:
    """First compact mode ``2 pi / circumference`` (natural units)."""
    if not circumference > 0:
        raise DomainError(f"circumference must be positive, got {circumference!r}")
    return 2.0 * math.pi / circumference


def effective_mass_si(compton_time_s: float) -> float:
    """Mass in kg whose Compton period is the given proper-time recurrence."""
    return si_mass_from_compton_time(compton_time_s)


@dataclass(frozen=True)
class FreezeoutScheme:
    """Cooling gradient ``K``, initial (nearly null) momentum, and ``s`` range.

    ``K = 0`` is accepted so the unwarped interval can be evaluated, but the
    evolution itself needs ``K > 0``.
    """

    K: float
    momentum: FourVector
    s_min: float = 0.0
    s_max: float = 5.0

    def __post_init__(self):
        if not (self.K >= 0 and math.isfinite(self.K)):
            raise DomainError(f"cooling gradient must be non-negative, got {self.K!r}")
        if not self.s_min < self.s_max:
            raise DomainError("need s_min < s_max")
        k = self.momentum if isinstance(self.momentum, FourVector) else FourVector.from_array(self.momentum)
        k = k.raise_index()
        if not k.t > 0:
            raise DomainError("initial momentum must have positive energy")
        null = abs(k.norm2()) / (k.t * k.t)
        if null >= NULL_TOL:
            raise DispersionError(f"initial momentum is not close to null (|k.k|/w^2 = {null:.3e})", null)
        object.__setattr__(self, "momentum", k)

    def check(self, s: float) -> None:
        if not self.s_min <= s <= self.s_max:
            raise DomainError(f"s={s!r} is outside [{self.s_min!r}, {self.s_max!r}]")


@dataclass(frozen=True)
class FreezeoutState:
    s: float
    momentum: FourVector
    period: FourVector
    conformal_time_period: float
    energy: float
    raw_energy: float
    warp_factor: float
    normalization: str = field(default=ENERGY_NORMALIZATION)


def _component_periods(k: FourVector) -> FourVector:
    vals = [2.0 * math.pi / abs(c) if c != 0 else math.inf for c in k.to_array()]
    return FourVector(*vals, index=CONTRAVARIANT)


def freezeout_evolution(scheme: FreezeoutScheme, s: float) -> FreezeoutState:
    scheme.check(s)
    if not scheme.K > 0:
        raise DomainError("freeze-out evolution needs a positive cooling gradient")
    K = scheme.K
    decay = math.exp(-K * s)
    k0 = scheme.momentum
    T0 = _component_periods(k0)
    grow = math.exp(K * s)
    period = FourVector(*(grow * c for c in T0.to_array()), index=CONTRAVARIANT)
    T = grow / K
    return FreezeoutState(
        s=s,
        momentum=k0.scaled(decay),
        period=period,
        conformal_time_period=T,
        energy=2.0 * math.pi * K * decay,
        raw_energy=decay * k0.t,
        warp_factor=decay * decay,
    )


def null_interval_check(scheme: FreezeoutScheme, displacement: FourVector, ds: float, s: float = 0.0) -> float:
    """Five-dimensional interval ``exp(-2 K s) dx.dx - ds^2``."""
    dx = displacement if isinstance(displacement, FourVector) else FourVector.from_array(displacement)
    return math.exp(-2.0 * scheme.K * s) * dx.norm2() - ds * ds


@dataclass(frozen=True)
class FreezeoutScan:
    s: np.ndarray
    energy: np.ndarray
    period: np.ndarray
    warp: np.ndarray
    interval_residual: np.ndarray

    csv_header = ("s", "E", "T", "warp", "dS2_residual")

    def rows(self):
        for row in zip(self.s, self.energy, self.period, self.warp, self.interval_residual):
            yield tuple(float(v) for v in row)

    def to_csv(self, path: "str | Path") -> Path:
        return atomic_write_csv(path, self.csv_header, self.rows())


def freezeout_scan(scheme: FreezeoutScheme, points: int = 1000, ds: float = 1e-3) -> FreezeoutScan:
    """Sample the evolution on a uniform grid over the scheme's ``s`` range.

    The interval residual is evaluated on the virtual trajectory
    ``dx = (exp(K s) ds, 0, 0, 0)``, which satisfies ``dS^2 = 0``.
    """
    if points < 2:
        raise ValueError("need at least two scan points")
    grid = np.linspace(scheme.s_min, scheme.s_max, points)
    states = [freezeout_evolution(scheme, float(s)) for s in grid]
    resid = [
        null_interval_check(scheme, FourVector(math.exp(scheme.K * s) * ds, 0.0, 0.0, 0.0), ds, float(s))
        for s in grid
    ]
    return FreezeoutScan(
        s=grid,
        energy=np.array([st.energy for st in states]),
        period=np.array([st.conformal_time_period for st in states]),
        warp=np.array([st.warp_factor for st in states]),
        interval_residual=np.array(resid),
    )
