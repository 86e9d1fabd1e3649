"""Interactions as local modulations of the period four-vector.

Three kinds of modulation are supported:

* weak Newtonian potential, ``omega -> (1 + GM/r) omega`` and
  ``T_t -> (1 - GM/r) T_t``, with the isotropic linearized form applied to
  the spatial periods (``lambda -> (1 + GM/r) lambda``);
* gauge potential on a sampled grid, acting by minimal substitution
  ``k_mu -> k_mu - e A_mu`` and through Wilson-line phases;
* conformal (exponential) scaling, used by the freeze-out scheme in
  :mod:`elementary_cycles.vxd`.

Gauge components are stored covariantly, so the line element contracts as
``A_mu dy^mu = sum_mu A[mu] * dy[mu]`` with no metric signs.  Path integrals
use the composite midpoint rule; all partial products are reduced with
:func:`math.fsum`, which makes path reversal negate the result exactly.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import DomainError, LinearizationError, SingularityError
from .kinematics import C_SI, COVARIANT, TWO_PI, FourVector, PeriodState

#: Upper bound on GM/r for the first-order formulas.
MAX_WEAK_FIELD = 0.1

DEFAULT_SUBDIVISIONS = 64

AXES = ("t", "x", "y", "z")


def geometrized_gm(gm_si: float) -> float:
    """Convert GM in m^3/s^2 to a length GM/c^2 in metres."""
    return gm_si / C_SI ** 2


def weak_field_strength(GM: float, r: float) -> float:
    """``GM/r`` after checking the linearized domain."""
    if r == 0:
        raise SingularityError("modulation evaluated at the source (|x| = 0)")
    if math.isinf(r):
        return 0.0
    eps = GM / r
    if abs(eps) >= MAX_WEAK_FIELD:
        raise LinearizationError(f"GM/|x| = {eps!r} outside the linearized domain (< {MAX_WEAK_FIELD})")
    return eps


@dataclass(frozen=True)
class NewtonianField:
    """Point mass with ``GM`` expressed as a length (natural units)."""

    GM: float

    def strength(self, positions: np.ndarray) -> np.ndarray:
        r = np.linalg.norm(np.asarray(positions, dtype=float).reshape(-1, 3), axis=1)
        if np.any(r == 0):
            raise SingularityError("modulation evaluated at the source (|x| = 0)")
        eps = self.GM / r
        if np.any(np.abs(eps) >= MAX_WEAK_FIELD):
            raise LinearizationError(
                f"GM/|x| up to {float(np.max(np.abs(eps)))!r} outside the linearized domain (< {MAX_WEAK_FIELD})"
            )
        return eps


@dataclass(frozen=True)
class ConformalField:
    """Exponential conformal scaling ``k -> exp(-K s) k`` along a parameter ``s``."""

    K: float

    def momentum_scale(self, s: "float | np.ndarray"):
        return np.exp(-self.K * np.asarray(s, dtype=float))

    def period_scale(self, s: "float | np.ndarray"):
        return np.exp(self.K * np.asarray(s, dtype=float))


class GaugeField:
    """Covariant four-potential sampled on a rectilinear (t, x, y, z) grid.

    Axes with a single sample are treated as directions along which the
    potential is constant; the remaining axes are interpolated multilinearly
    and bound the domain.
    """

    def __init__(self, axes: Sequence[Sequence[float]], potential: np.ndarray, charge: float = 1.0):
        if len(axes) != 4:
            raise ValueError("need one coordinate array per axis (t, x, y, z)")
        self.axes = tuple(np.asarray(a, dtype=float).ravel() for a in axes)
        shape = tuple(a.size for a in self.axes)
        A = np.asarray(potential, dtype=float)
        if A.shape != shape + (4,):
            raise ValueError(f"potential shape {A.shape} does not match grid {shape + (4,)}")
        if not np.all(np.isfinite(A)):
            raise ValueError("potential contains non-finite values")
        for name, a in zip(AXES, self.axes):
            if a.size > 1 and not np.all(np.diff(a) > 0):
                raise ValueError(f"axis {name} must be strictly increasing")
        self.potential = A
        self.charge = float(charge)
        self._active = [i for i, a in enumerate(self.axes) if a.size > 1]
        squeezed = A.reshape(tuple(a.size for a in self.axes if a.size > 1) + (4,))
        if self._active:
            self._interp = RegularGridInterpolator([self.axes[i] for i in self._active], squeezed)
        else:
            self._interp = None

    @classmethod
    def from_function(
        cls,
        func: Callable[[np.ndarray], np.ndarray],
        t: Sequence[float] = (0.0,),
        x: Sequence[float] = (0.0,),
        y: Sequence[float] = (0.0,),
        z: Sequence[float] = (0.0,),
        charge: float = 1.0,
    ) -> "GaugeField":
        """Sample ``func(points) -> (P, 4)`` on the tensor grid."""
        axes = [np.asarray(a, dtype=float) for a in (t, x, y, z)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
        values = np.asarray(func(mesh.reshape(-1, 4)), dtype=float).reshape(mesh.shape)
        return cls(axes, values, charge)

    @classmethod
    def constant(cls, value: Sequence[float], charge: float = 1.0) -> "GaugeField":
        return cls([[0.0]] * 4, np.asarray(value, dtype=float).reshape(1, 1, 1, 1, 4), charge)

    @classmethod
    def from_csv(cls, path: "str | Path", charge: float = 1.0) -> "GaugeField":
        """Load columns ``x, y, z, t, A0, A1, A2, A3`` forming a full tensor grid."""
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            required = ["x", "y", "z", "t", "A0", "A1", "A2", "A3"]
            missing = [c for c in required if c not in (reader.fieldnames or [])]
            if missing:
                raise ValueError(f"gauge CSV {path} missing columns: {', '.join(missing)}")
            rows = [[float(r[c]) for c in required] for r in reader]
        if not rows:
            raise ValueError(f"gauge CSV {path} has no rows")
        data = np.array(rows)
        coords = data[:, [3, 0, 1, 2]]
        axes = [np.unique(coords[:, i]) for i in range(4)]
        shape = tuple(a.size for a in axes)
        if int(np.prod(shape)) != len(rows):
            raise ValueError(f"gauge CSV {path} does not form a complete tensor grid {shape}")
        A = np.full(shape + (4,), np.nan)
        idx = tuple(np.searchsorted(axes[i], coords[:, i]) for i in range(4))
        A[idx] = data[:, 4:]
        if np.isnan(A).any():
            raise ValueError(f"gauge CSV {path} has duplicate grid nodes")
        return cls(axes, A, charge)

    def to_csv(self, path: "str | Path") -> None:
        t, x, y, z = self.axes
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y", "z", "t", "A0", "A1", "A2", "A3"])
            for i, tv in enumerate(t):
                for j, xv in enumerate(x):
                    for k, yv in enumerate(y):
                        for l, zv in enumerate(z):
                            w.writerow([repr(float(v)) for v in (xv, yv, zv, tv, *self.potential[i, j, k, l])])

    @property
    def bounds(self) -> list[tuple[float, float]]:
        return [(float(a[0]), float(a[-1])) for a in self.axes]

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = as_spacetime(points)
        ok = np.ones(len(pts), dtype=bool)
        for i in self._active:
            lo, hi = self.axes[i][0], self.axes[i][-1]
            ok &= (pts[:, i] >= lo) & (pts[:, i] <= hi)
        return ok

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Covariant components ``A_mu`` at points of shape (P, 4)."""
        pts = as_spacetime(points)
        if not np.all(self.contains(pts)):
            bad = pts[~self.contains(pts)][0]
            raise DomainError(f"point {bad.tolist()} lies outside the gauge-field grid {self.bounds}")
        if self._interp is None:
            return np.broadcast_to(self.potential.reshape(4), (len(pts), 4)).copy()
        return self._interp(pts[:, self._active])

    def cell_centers(self, max_points: int = 200) -> np.ndarray:
        """Centres of grid cells (where the interpolant is smooth), thinned to ``max_points``."""
        centers = []
        for a in self.axes:
            centers.append(0.5 * (a[1:] + a[:-1]) if a.size > 1 else a)
        mesh = np.stack(np.meshgrid(*centers, indexing="ij"), axis=-1).reshape(-1, 4)
        if len(mesh) > max_points:
            mesh = mesh[np.linspace(0, len(mesh) - 1, max_points).round().astype(int)]
        return mesh


def as_spacetime(points) -> np.ndarray:
    """Coerce points to shape (P, 4); bare spatial (P, 3) points get ``t = 0``."""
    if isinstance(points, FourVector):
        return points.raise_index().to_array()[None, :]
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[-1] == 3:
        pts = np.concatenate([np.zeros((len(pts), 1)), pts], axis=1)
    if pts.shape[-1] != 4:
        raise ValueError(f"points must have 3 or 4 components, got shape {pts.shape}")
    return pts


def _midpoints(path: np.ndarray, subdivisions: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoints (S*n, 4) and matching displacements (S*n, 4) of each sub-interval.

    Weights are formed so that a reversed segment yields bit-identical points.
    """
    j = np.arange(subdivisions)
    w_start = ((subdivisions - j) - 0.5) / subdivisions
    w_end = (j + 0.5) / subdivisions
    a = path[:-1, None, :]
    b = path[1:, None, :]
    mids = a * w_start[None, :, None] + b * w_end[None, :, None]
    steps = np.broadcast_to(((path[1:] - path[:-1]) / subdivisions)[:, None, :], mids.shape)
    return mids.reshape(-1, 4), steps.reshape(-1, 4)


def line_integral(
    covector: Callable[[np.ndarray], np.ndarray],
    path,
    subdivisions: int = DEFAULT_SUBDIVISIONS,
) -> float:
    """``int covector_mu dy^mu`` along a polyline by the composite midpoint rule."""
    pts = as_spacetime(path)
    if len(pts) < 2:
        warnings.warn("degenerate path with a single point; line integral is zero", stacklevel=2)
        return 0.0
    if subdivisions < 1:
        raise ValueError("subdivisions must be >= 1")
    mids, steps = _midpoints(pts, subdivisions)
    return math.fsum((covector(mids) * steps).ravel())


def wilson_line_phase(A: GaugeField, path, subdivisions: int = DEFAULT_SUBDIVISIONS) -> float:
    """Phase ``e * int A_mu dy^mu`` of the Wilson line along ``path``."""
    pts = as_spacetime(path)
    if len(pts) < 2:
        warnings.warn("degenerate path with a single point; Wilson phase is zero", stacklevel=2)
        return 0.0
    if not np.all(A.contains(pts)):
        raise DomainError("path leaves the gauge-field grid")
    return A.charge * line_integral(A, pts, subdivisions)


def minimal_substitution(base: PeriodState, A: GaugeField, x) -> FourVector:
    """Local covariant momentum ``k_mu - e A_mu(x)``."""
    k = base.momentum.lower().to_array()
    return FourVector.from_array(k - A.charge * A(as_spacetime(x))[0], COVARIANT)


@dataclass(frozen=True)
class ModulationSample:
    """Local momentum/period of a modulated state at one position."""

    position: np.ndarray
    strength: float
    momentum: FourVector
    period: FourVector

    @property
    def harmony_residual(self) -> float:
        return abs(self.momentum.dot(self.period) - TWO_PI)

    @property
    def relative_residual(self) -> float:
        return abs(self.momentum.dot(self.period) / TWO_PI - 1.0)


def _newtonian_scale(base: PeriodState, eps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    k = base.momentum.lower().to_array()
    T = base.period.raise_index().to_array()
    up = np.array([1.0, -1.0, -1.0, -1.0])
    k_loc = k[None, :] * (1.0 + up[None, :] * eps[:, None])
    T_loc = T[None, :] * (1.0 - up[None, :] * eps[:, None])
    return k_loc, T_loc


def newtonian_modulation(GM: float, base: PeriodState, x: Sequence[float]) -> ModulationSample:
    """Weak-field modulation at spatial position ``x`` (same length unit as ``GM``).

    Energy scales by ``1 + GM/r`` and the time period by ``1 - GM/r``; spatial
    momenta scale by ``1 - GM/r`` and wavelengths by ``1 + GM/r``.  Phase
    harmony then holds up to ``(GM/r)**2``.
    """
    pos = np.asarray(x, dtype=float).reshape(3)
    eps = NewtonianField(GM).strength(pos[None, :])
    k_loc, T_loc = _newtonian_scale(base, eps)
    return ModulationSample(
        pos,
        float(eps[0]),
        FourVector.from_array(k_loc[0], COVARIANT),
        FourVector.from_array(T_loc[0]),
    )


def gravitational_redshift(GM: float, r_emit: float, r_obs: float = math.inf) -> float:
    """First-order fractional frequency shift ``GM/r_obs - GM/r_emit``."""
    for r in (r_emit, r_obs):
        if not r > 0:
            raise DomainError(f"radii must be positive, got {r!r}")
    return weak_field_strength(GM, r_obs) - weak_field_strength(GM, r_emit)


class ModulatedState:
    """Free state plus a position-dependent local momentum ``k'_mu(x)``."""

    def __init__(
        self,
        base: PeriodState,
        local_momentum: Callable[[np.ndarray], np.ndarray],
        local_period: Callable[[np.ndarray], np.ndarray],
    ):
        self.base = base
        self._momentum = local_momentum
        self._period = local_period

    def local_momentum(self, points) -> np.ndarray:
        """Covariant ``k'_mu`` at points (P, 4)."""
        return self._momentum(as_spacetime(points))

    def local_period(self, points) -> np.ndarray:
        """Contravariant ``T'^mu`` at points (P, 4)."""
        return self._period(as_spacetime(points))

    def harmony_residuals(self, points) -> np.ndarray:
        k = self.local_momentum(points)
        T = self.local_period(points)
        return np.abs(np.sum(k * T, axis=1) - TWO_PI)


def free_state(base: PeriodState) -> ModulatedState:
    k = base.momentum.lower().to_array()
    T = base.period.raise_index().to_array()
    return ModulatedState(
        base,
        lambda p: np.broadcast_to(k, (len(p), 4)).copy(),
        lambda p: np.broadcast_to(T, (len(p), 4)).copy(),
    )


def newtonian_state(GM: float, base: PeriodState) -> ModulatedState:
    field = NewtonianField(GM)
    return ModulatedState(
        base,
        lambda p: _newtonian_scale(base, field.strength(p[:, 1:]))[0],
        lambda p: _newtonian_scale(base, field.strength(p[:, 1:]))[1],
    )


def gauge_state(A: GaugeField, base: PeriodState) -> ModulatedState:
    """Minimal substitution; the local period is the parallel vector with ``k'.T' = 2 pi``."""
    k = base.momentum.lower().to_array()
    metric = np.array([1.0, -1.0, -1.0, -1.0])

    def momentum(p):
        return k[None, :] - A.charge * A(p)

    def period(p):
        kl = momentum(p)
        k_up = kl * metric
        kk = np.sum(kl * k_up, axis=1)
        if np.any(kk <= 0):
            raise DomainError("minimally substituted momentum is not timelike")
        return TWO_PI * k_up / kk[:, None]

    return ModulatedState(base, momentum, period)


def accumulated_phase(state: ModulatedState, path, subdivisions: int = DEFAULT_SUBDIVISIONS) -> float:
    """``int k'_mu dy^mu`` along a spacetime path."""
    return line_integral(state.local_momentum, path, subdivisions)


def modulated_wave(state: ModulatedState, path, subdivisions: int = DEFAULT_SUBDIVISIONS) -> complex:
    """Value ``exp(-i int k'_mu dy^mu)`` of the modulated fundamental at the path end,
    relative to its value at the path start."""
    return complex(np.exp(-1j * accumulated_phase(state, path, subdivisions)))


@dataclass(frozen=True)
class TuningReport:
    h: float
    residuals: np.ndarray
    points: np.ndarray

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals))


def tuning_check(
    A: GaugeField,
    base: PeriodState,
    points: "np.ndarray | None" = None,
    h: float = 1e-3,
    subdivisions: int = 8,
) -> TuningReport:
    """Verify ``d_mu Phi = U^-1 D_mu Phi'`` with ``Phi' = U Phi`` pointwise.

    ``Phi`` is the free fundamental ``exp(-i k_mu x^mu)``; ``U`` is the Wilson
    line from the grid's lower corner, extended straight along each axis for
    the central differences.  ``D_mu Phi'`` is evaluated by central finite
    differences with step ``h``; the left side is exact, so the residual is the
    finite-difference error.
    """
    pts = A.cell_centers() if points is None else as_spacetime(points)
    origin = np.array([lo for lo, _ in A.bounds])
    k = base.momentum.lower().to_array()

    def free(y):
        return np.exp(-1j * float(y @ k))

    residuals = np.empty((len(pts), 4))
    for i, x in enumerate(pts):
        phase_x = wilson_line_phase(A, np.stack([origin, x]), subdivisions)
        U_x = np.exp(1j * phase_x)
        phi_prime_x = U_x * free(x)
        A_x = A(x[None, :])[0]
        for mu in range(4):
            step = np.zeros(4)
            step[mu] = h
            fwd = x + step
            bwd = x - step
            phi_fwd = np.exp(1j * (phase_x + wilson_line_phase(A, np.stack([x, fwd]), subdivisions))) * free(fwd)
            phi_bwd = np.exp(1j * (phase_x + wilson_line_phase(A, np.stack([x, bwd]), subdivisions))) * free(bwd)
            D_phi_prime = (phi_fwd - phi_bwd) / (2 * h) - 1j * A.charge * A_x[mu] * phi_prime_x
            exact = -1j * k[mu] * free(x)
            residuals[i, mu] = abs(exact - D_phi_prime / U_x)
    return TuningReport(h, residuals.max(axis=1), pts)


def convergence_order(hs: Sequence[float], residuals: Sequence[float]) -> float:
    """Least-squares slope of ``log(residual)`` against ``log(h)``."""
    return float(np.polyfit(np.log(hs), np.log(residuals), 1)[0])
