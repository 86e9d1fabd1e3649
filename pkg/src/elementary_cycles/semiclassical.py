"""Bohr-Sommerfeld quantization of one-dimensional and radial potentials.

Levels solve ``oint p dx = 2*pi*(n + offset)`` with the non-relativistic
momentum ``p(x) = sqrt(2 m (E - V(x)))``; ``offset`` is 0 for PBC and 1/2 for
anti-PBC.  No Maslov correction is added under PBC.

For the radial Coulomb problem the angular quantum number ``k = l + 1``
enters as an integer angular momentum, giving the radial condition
``oint p_r dr = 2*pi*(n - k)`` with principal number ``n = n_r + l + 1``.

The action integral is split at the midpoint of the classically allowed
region; each half is mapped with ``x = x_turn -/+ u**2``, which removes the
square-root zero at the turning point, and integrated by Gauss-Legendre.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError, NoTurningPointError, UnresolvedLevelError
from .spectrum import BoundaryCondition

DEFAULT_NODES = 128
ACTION_TOL = 1e-9
_MAX_EXPANSIONS = 200


class Potential:
    """Single-well potential with a known minimum.

    Subclasses provide ``V``, ``minimum`` and scales; the generic turning-point
    search walks outward from the minimum by doubling, then bisects.
    """

    mass: float
    domain: tuple[float, float] = (-math.inf, math.inf)
    energy_ceiling: float = math.inf
    #: Inner search approaches the origin geometrically (r > 0 problems).
    radial: bool = False

    def V(self, x):
        raise NotImplementedError

    def minimum(self) -> tuple[float, float]:
        raise NotImplementedError

    @property
    def length_scale(self) -> float:
        return 1.0

    @property
    def energy_scale(self) -> float:
        return 1.0

    def angular_offset(self) -> int:
        """Integer subtracted from ``n`` in the quantization target."""
        return 0

    def target_action(self, n: int, bc: BoundaryCondition = BoundaryCondition.PBC) -> float:
        return 2.0 * math.pi * (n - self.angular_offset() + bc.offset)

    def _outer(self, E: float, x0: float, direction: int) -> float:
        edge = self.domain[1] if direction > 0 else self.domain[0]
        halving = direction < 0 and self.radial
        inner = x0
        step = self.length_scale
        for _ in range(_MAX_EXPANSIONS):
            if halving:
                trial = 0.5 * inner
            else:
                trial = x0 + direction * step
                step *= 2.0
            if (trial - edge) * direction >= 0:
                if not math.isfinite(edge) or self.V(edge) < E:
                    raise DomainError(f"no turning point for E={E!r} inside the domain {self.domain}")
                trial = edge
            if self.V(trial) >= E:
                a, b = sorted((inner, trial))
                return brentq(lambda x: self.V(x) - E, a, b,
                              xtol=1e-15 * max(abs(a), abs(b)), rtol=4 * np.finfo(float).eps, maxiter=500)
            inner = trial
        raise DomainError(f"turning point search for E={E!r} did not terminate")

    def turning_points(self, E: float) -> tuple[float, float]:
        x0, vmin = self.minimum()
        if E < vmin:
            raise NoTurningPointError(f"E={E!r} is below the potential minimum {vmin!r}")
        if E == vmin:
            return x0, x0
        if E >= self.energy_ceiling:
            raise DomainError(f"E={E!r} is not below the continuum threshold {self.energy_ceiling!r}")
        return self._outer(E, x0, -1), self._outer(E, x0, +1)


@dataclass(frozen=True)
class HarmonicOscillator(Potential):
    mass: float
    omega: float

    def V(self, x):
        return 0.5 * self.mass * self.omega ** 2 * np.asarray(x) ** 2

    def minimum(self):
        return 0.0, 0.0

    @property
    def length_scale(self):
        return 1.0 / math.sqrt(self.mass * self.omega)

    @property
    def energy_scale(self):
        return self.omega


@dataclass(frozen=True)
class Coulomb(Potential):
    """Attractive ``-coupling/r`` with integer angular momentum ``angular`` (= l + 1)."""

    mass: float
    coupling: float
    angular: int = 1
    domain = (0.0, math.inf)
    energy_ceiling = 0.0
    radial = True

    def __post_init__(self):
        if self.angular < 1:
            raise ValueError("angular quantum number k = l + 1 must be >= 1")

    def V(self, r):
        r = np.asarray(r, dtype=float)
        return -self.coupling / r + self.angular ** 2 / (2.0 * self.mass * r ** 2)

    def minimum(self):
        r0 = self.angular ** 2 / (self.mass * self.coupling)
        return r0, -self.mass * self.coupling ** 2 / (2.0 * self.angular ** 2)

    @property
    def length_scale(self):
        return self.minimum()[0]

    @property
    def energy_scale(self):
        return abs(self.minimum()[1])

    def angular_offset(self):
        return self.angular


@dataclass(frozen=True)
class SquareWell(Potential):
    """Infinite square well on ``[0, width]``."""

    mass: float
    width: float

    @property
    def domain(self):
        return (0.0, self.width)

    def V(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def minimum(self):
        return 0.5 * self.width, 0.0

    @property
    def length_scale(self):
        return self.width

    @property
    def energy_scale(self):
        return 1.0 / (self.mass * self.width ** 2)

    def turning_points(self, E):
        if E < 0:
            raise NoTurningPointError(f"E={E!r} is below the well floor")
        if E == 0:
            return 0.5 * self.width, 0.5 * self.width
        return 0.0, self.width


class Tabulated(Potential):
    """Potential interpolated from ordered samples by a cubic spline."""

    def __init__(self, x: Sequence[float], V: Sequence[float], mass: float = 1.0):
        x = np.asarray(x, dtype=float)
        v = np.asarray(V, dtype=float)
        if x.ndim != 1 or x.size < 4 or x.shape != v.shape:
            raise ValueError("need at least four (x, V) samples of equal length")
        if not np.all(np.diff(x) > 0):
            raise ValueError("tabulated positions must be strictly increasing")
        self.mass = float(mass)
        self.x = x
        self.samples = v
        self._spline = CubicSpline(x, v)
        self.domain = (float(x[0]), float(x[-1]))
        self.energy_ceiling = float(min(v[0], v[-1]))
        i = int(np.argmin(v))
        lo, hi = x[max(i - 1, 0)], x[min(i + 1, x.size - 1)]
        res = minimize_scalar(lambda s: float(self._spline(s)), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * (x[-1] - x[0])})
        self._min = (float(res.x), float(self._spline(res.x)))

    @classmethod
    def from_csv(cls, path: "str | Path", mass: float = 1.0) -> "Tabulated":
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if not reader.fieldnames or not {"x", "V"} <= set(reader.fieldnames):
                raise ValueError(f"potential CSV {path} needs columns x, V")
            rows = [(float(r["x"]), float(r["V"])) for r in reader]
        x, v = zip(*rows) if rows else ((), ())
        return cls(x, v, mass)

    def V(self, x):
        return self._spline(x)

    def minimum(self):
        return self._min

    @property
    def length_scale(self):
        return (self.domain[1] - self.domain[0]) / 64

    @property
    def energy_scale(self):
        return max(self.energy_ceiling - self._min[1], 1e-300)


def action_integral(p: Potential, E: float, nodes: int = DEFAULT_NODES) -> float:
    """Closed-orbit action ``2 * int_{x-}^{x+} sqrt(2 m (E - V)) dx``."""
    x_minus, x_plus = p.turning_points(E)
    return _action_between(p, E, x_minus, x_plus, nodes)


def _action_between(p: Potential, E: float, x_minus: float, x_plus: float, nodes: int) -> float:
    if x_plus <= x_minus:
        return 0.0
    u, w = np.polynomial.legendre.leggauss(nodes)
    mid = 0.5 * (x_minus + x_plus)
    half = math.sqrt(mid - x_minus)
    # u in [0, half] on each side
    s = 0.5 * half * (u + 1.0)
    ws = 0.5 * half * w

    def momentum(x):
        return np.sqrt(np.maximum(2.0 * p.mass * (E - p.V(x)), 0.0))

    right = np.sum(ws * momentum(x_plus - s * s) * 2.0 * s)
    left = np.sum(ws * momentum(x_minus + s * s) * 2.0 * s)
    return float(2.0 * (left + right))


@dataclass(frozen=True)
class LevelResult:
    n: int
    energy: float
    action_value: float
    turning_points: tuple[float, float]
    iterations: int

    csv_header = ("n", "E", "action", "x_minus", "x_plus")

    def row(self) -> tuple:
        return (self.n, self.energy, self.action_value, self.turning_points[0], self.turning_points[1])


def _upper_bracket(p: Potential, target: float, nodes: int) -> float:
    _, vmin = p.minimum()
    ceiling = p.energy_ceiling
    for j in range(1, _MAX_EXPANSIONS):
        if math.isfinite(ceiling):
            E = ceiling - (ceiling - vmin) * 2.0 ** (-j)
        else:
            E = vmin + p.energy_scale * 2.0 ** (j - 1)
        try:
            if action_integral(p, E, nodes) > target:
                return E
        except DomainError:
            if not math.isfinite(ceiling):
                break
            continue
        if math.isfinite(ceiling) and E == ceiling:
            break
    raise UnresolvedLevelError(f"could not bracket action {target!r}", (vmin, E))


def solve_level(
    p: Potential,
    n: int,
    bc: "BoundaryCondition | str" = BoundaryCondition.PBC,
    nodes: int = DEFAULT_NODES,
    tol: float = ACTION_TOL,
) -> LevelResult:
    bc = BoundaryCondition.parse(bc)
    target = p.target_action(n, bc)
    x0, vmin = p.minimum()
    if target < 0:
        raise ValueError(f"level n={n} is below the angular threshold {p.angular_offset()}")
    if target == 0:
        return LevelResult(n, vmin, 0.0, (x0, x0), 0)
    hi = _upper_bracket(p, target, nodes)
    E, info = brentq(
        lambda e: action_integral(p, e, nodes) - target,
        vmin,
        hi,
        xtol=1e-15 * max(abs(vmin), abs(hi), p.energy_scale),
        rtol=4 * np.finfo(float).eps,
        maxiter=500,
        full_output=True,
    )
    action = action_integral(p, E, nodes)
    if not abs(action - target) < tol:
        raise UnresolvedLevelError(f"level n={n}: action residual {abs(action - target):.3e} exceeds {tol}", (vmin, hi))
    return LevelResult(n, E, action, p.turning_points(E), info.iterations)


def bohr_sommerfeld_levels(
    p: Potential,
    n_min: int,
    n_max: int,
    bc: "BoundaryCondition | str" = BoundaryCondition.PBC,
    nodes: int = DEFAULT_NODES,
    tol: float = ACTION_TOL,
) -> list[LevelResult]:
    """Solve the quantization condition for ``n_min <= n <= n_max``."""
    if n_min < 1 or n_max < n_min:
        raise ValueError(f"need 1 <= n_min <= n_max, got {n_min}, {n_max}")
    levels = [solve_level(p, n, bc, nodes, tol) for n in range(n_min, n_max + 1)]
    energies = [lv.energy for lv in levels]
    if any(b <= a for a, b in zip(energies, energies[1:])):
        raise UnresolvedLevelError("level energies are not strictly increasing", (energies[0], energies[-1]))
    return levels
