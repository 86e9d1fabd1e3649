"""Integer charges read off closed loops.

Winding numbers come from unwrapping sampled phases, which is exact for
adequately sampled loops; line integrals by trapezoid quadrature are used
for the Dirac monopole condition and as an independent Stokes cross-check of
flux quantization.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from ._io import atomic_write_csv
from .errors import SingularityError, StokesInconsistencyError, UndersampledLoopError

MIN_SAMPLES = 8
#: Largest accepted step between neighbouring phases; a factor two inside
#: the pi ambiguity of unwrapping.
MAX_PHASE_STEP = 0.5 * math.pi
ROUNDING_TOL = 0.25
REFINEMENT_TOL = 0.1
STOKES_TOL = 1e-3
DIRAC_UNIT = math.pi
FD_STEP = 1e-5


def flux_unit(e: float) -> float:
    return 1.0 / (2.0 * e)


def _as_positions(positions) -> np.ndarray:
    pts = np.asarray(positions, dtype=float)
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise ValueError("loop positions must have shape (N, 2) or (N, 3)")
    if pts.shape[1] == 2:
        pts = np.column_stack([pts, np.zeros(len(pts))])
    return pts


@dataclass(frozen=True)
class LoopSamples:
    """Ordered samples on a closed loop; the closing segment is implicit.

    ``values`` holds one phase per point (real angles, or complex order
    parameter samples whose argument is used) or one spatial vector per point.
    ``field`` optionally gives the phase as a function of position, used for
    the finite-difference gradient cross-check.
    """

    positions: np.ndarray
    values: np.ndarray
    field: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        pts = _as_positions(self.positions)
        vals = np.asarray(self.values)
        if len(pts) < MIN_SAMPLES:
            raise UndersampledLoopError(f"need at least {MIN_SAMPLES} loop samples, got {len(pts)}")
        if len(vals) != len(pts):
            raise ValueError("one value per loop position is required")
        if np.allclose(pts[0], pts[-1], rtol=0, atol=0) and len(pts) > 1:
            raise ValueError("first and last samples coincide; closure is implicit")
        if np.iscomplexobj(vals):
            if vals.ndim != 1:
                raise ValueError("complex samples must be one per point")
            if np.any(vals == 0):
                raise SingularityError("order parameter vanishes on the loop; phase undefined")
            vals = np.angle(vals)
        else:
            vals = vals.astype(float)
        object.__setattr__(self, "positions", pts)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.positions)

    @classmethod
    def from_phase_field(cls, positions, field: Callable[[np.ndarray], np.ndarray]) -> "LoopSamples":
        pts = _as_positions(positions)
        return cls(pts, np.asarray(field(pts), dtype=float), field)

    @classmethod
    def from_vector_field(cls, positions, field: Callable[[np.ndarray], np.ndarray]) -> "LoopSamples":
        pts = _as_positions(positions)
        return cls(pts, np.asarray(field(pts), dtype=float))

    def reversed(self) -> "LoopSamples":
        return LoopSamples(self.positions[::-1], self.values[::-1], self.field)

    def rotated(self, shift: int) -> "LoopSamples":
        return LoopSamples(np.roll(self.positions, shift, axis=0), np.roll(self.values, shift, axis=0), self.field)

    def segments(self) -> np.ndarray:
        return np.roll(self.positions, -1, axis=0) - self.positions


@dataclass(frozen=True)
class QuantizationVerdict:
    raw: float
    unit: float
    n: int
    residual: float
    stokes_residual: Optional[float] = None
    tolerance: float = ROUNDING_TOL

    csv_header = ("raw", "unit", "n", "residual", "verdict")

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance * self.unit

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def row(self) -> tuple:
        return (self.raw, self.unit, self.n, self.residual, self.verdict)


def _verdict(raw: float, unit: float, **kw) -> QuantizationVerdict:
    n = int(round(raw / unit))
    return QuantizationVerdict(raw, unit, n, abs(raw - n * unit), **kw)


def write_verdicts(path: "str | Path", verdicts) -> Path:
    return atomic_write_csv(path, QuantizationVerdict.csv_header, (v.row() for v in verdicts))


def wrap_phase(d):
    """Map phase differences into ``(-pi, pi]``."""
    d = np.asarray(d, dtype=float)
    return d - 2.0 * np.pi * np.ceil((d - np.pi) / (2.0 * np.pi))


def _phase_steps(loop: LoopSamples) -> np.ndarray:
    if loop.values.ndim != 1:
        raise ValueError("phase winding needs one phase per sample")
    steps = wrap_phase(np.roll(loop.values, -1) - loop.values)
    worst = float(np.max(np.abs(steps)))
    if worst >= MAX_PHASE_STEP:
        raise UndersampledLoopError(
            f"phase step {worst:.3f} rad between neighbouring samples exceeds {MAX_PHASE_STEP:.3f}; refine the loop"
        )
    return steps


def total_phase(loop: LoopSamples) -> float:
    """Unwrapped phase accumulated once around the loop."""
    return math.fsum(_phase_steps(loop))


def phase_winding(loop: LoopSamples) -> int:
    turns = total_phase(loop) / (2.0 * math.pi)
    n = round(turns)
    if abs(turns - n) >= ROUNDING_TOL:
        raise UndersampledLoopError(f"unwrapped phase is {turns:.4f} turns, not close to an integer")
    return int(n)


def loop_integral(loop: LoopSamples) -> float:
    """Trapezoid ``oint V . dx`` over the closed polyline for vector samples."""
    vals = loop.values
    if vals.ndim != 2 or vals.shape[1] not in (2, 3):
        raise ValueError("vector samples must have shape (N, 2) or (N, 3)")
    if vals.shape[1] == 2:
        vals = np.column_stack([vals, np.zeros(len(vals))])
    avg = 0.5 * (vals + np.roll(vals, -1, axis=0))
    seg = loop.segments()
    terms = avg[:, 0] * seg[:, 0] + avg[:, 1] * seg[:, 1] + avg[:, 2] * seg[:, 2]
    return math.fsum(terms)


def dirac_quantization_check(loop: LoopSamples, e: float) -> QuantizationVerdict:
    """``e oint A . dx`` measured in units of pi."""
    return _verdict(e * loop_integral(loop), DIRAC_UNIT)


def phase_gradient(field: Callable[[np.ndarray], np.ndarray], points: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Central-difference gradient of a phase field, branch-cut safe.

    Differences are taken on ``exp(i theta)`` so a jump of 2 pi between the
    two stencil points does not contaminate the result.
    """
    pts = _as_positions(points)
    grad = np.zeros_like(pts)
    z0 = np.exp(1j * np.asarray(field(pts), dtype=float))
    for axis in range(3):
        step = np.zeros(3)
        step[axis] = h
        zp = np.exp(1j * np.asarray(field(pts + step), dtype=float))
        zm = np.exp(1j * np.asarray(field(pts - step), dtype=float))
        grad[:, axis] = np.imag(np.conj(z0) * (zp - zm)) / (2.0 * h)
    return grad


def _tangential_gradient_integral(loop: LoopSamples) -> float:
    # central differences of the unwrapped phase against arc length
    steps = _phase_steps(loop)
    ds = np.linalg.norm(loop.segments(), axis=1)
    ds_prev = np.roll(ds, 1)
    steps_prev = np.roll(steps, 1)
    slope = (steps + steps_prev) / (ds + ds_prev)
    return math.fsum(0.5 * (slope + np.roll(slope, -1)) * ds)


def stokes_integral(loop: LoopSamples) -> float:
    """Trapezoid ``oint grad(theta) . dx`` from finite differences."""
    if loop.field is None:
        return _tangential_gradient_integral(loop)
    grad = phase_gradient(loop.field, loop.positions)
    return loop_integral(LoopSamples(loop.positions, grad))


def flux_quantization_check(loop: LoopSamples, e: float, stokes_tol: float = STOKES_TOL) -> QuantizationVerdict:
    """Flux ``winding / (2e)`` in units of ``1/(2e)`` with a gradient cross-check."""
    if not e > 0:
        raise ValueError(f"charge must be positive, got {e!r}")
    n = phase_winding(loop)
    unit = flux_unit(e)
    raw = total_phase(loop) / (2.0 * math.pi) * unit
    quad = stokes_integral(loop) / (2.0 * math.pi)
    mismatch = abs(quad - n)
    if mismatch > stokes_tol * max(1, abs(n)):
        raise StokesInconsistencyError(
            f"gradient quadrature gives {quad:.6f} turns against winding {n} (tolerance {stokes_tol} relative)"
        )
    return QuantizationVerdict(raw, unit, int(round(raw / unit)), abs(raw - n * unit), stokes_residual=mismatch)


def circle_loop(center=(0.0, 0.0, 0.0), radius: float = 1.0, samples: int = 64, phase0: float = 0.0) -> np.ndarray:
    """Counter-clockwise circle in the plane ``z = center_z``."""
    t = phase0 + 2.0 * np.pi * np.arange(samples) / samples
    c = np.asarray(center, dtype=float).reshape(-1)
    cz = c[2] if c.size > 2 else 0.0
    return np.column_stack([c[0] + radius * np.cos(t), c[1] + radius * np.sin(t), np.full(samples, cz)])


def vortex_phase(centers, charges) -> Callable[[np.ndarray], np.ndarray]:
    """Phase field ``sum_j q_j atan2(y - y_j, x - x_j)`` of point vortices."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    charges = np.atleast_1d(np.asarray(charges, dtype=int))
    if len(centers) != len(charges):
        raise ValueError("one charge per vortex centre")

    def theta(points):
        pts = _as_positions(points)
        out = np.zeros(len(pts))
        for (cx, cy, *_), q in zip(centers, charges):
            out += q * np.arctan2(pts[:, 1] - cy, pts[:, 0] - cx)
        return out

    return theta


def monopole_potential(g: float) -> Callable[[np.ndarray], np.ndarray]:
    """Vector potential ``g (1 - cos th) / (r sin th)`` along phi-hat.

    The Dirac string lies on the negative z axis.
    """

    def A(points):
        pts = _as_positions(points)
        x, y, z = pts.T
        rho2 = x * x + y * y
        r = np.sqrt(rho2 + z * z)
        if np.any((rho2 == 0) & (z <= 0)):
            raise SingularityError("monopole potential evaluated on the Dirac string")
        # (1 - cos th)/(r sin th) * phi_hat = (r - z)/(r rho^2) * (-y, x, 0)
        with np.errstate(invalid="ignore", divide="ignore"):
            f = np.where(rho2 > 0, g * (r - z) / (r * rho2), 0.0)
        return np.column_stack([-y * f, x * f, np.zeros_like(x)])

    return A


def load_loop_csv(path: "str | Path") -> LoopSamples:
    """Columns ``index, x, y, z`` then one phase column or vector components."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or [h.strip() for h in header[:4]] != ["index", "x", "y", "z"] or len(header) < 5:
            raise ValueError(f"loop CSV {path} needs columns index, x, y, z, value...")
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise ValueError(f"loop CSV {path} has no samples")
    data = np.array(rows)
    order = np.argsort(data[:, 0], kind="stable")
    data = data[order]
    values = data[:, 4] if data.shape[1] == 5 else data[:, 4:]
    return LoopSamples(data[:, 1:4], values)
