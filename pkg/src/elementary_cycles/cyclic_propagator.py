"""Heat kernels on a compactified Euclidean time circle.

The same kernel is built two ways: as a sum over winding images of the free
Gaussian (paths wrapping the circle ``w`` times) and as a sum over the
harmonic modes ``2*pi*n/T``.  Poisson resummation says they agree; the
comparison here is certified against explicit truncation-tail bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._io import atomic_write_csv, atomic_write_text
from .errors import TruncationError

TAIL_LIMIT = 1e-12
EQUIVALENCE_TOL = 1e-9


@dataclass(frozen=True)
class CyclicKernelSpec:
    period: float
    beta: float
    w_max: int = 12
    n_max: int = 64

    def __post_init__(self):
        if not (self.period > 0 and math.isfinite(self.period)):
            raise ValueError(f"period must be positive and finite, got {self.period!r}")
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive and finite, got {self.beta!r}")
        if self.w_max < 1 or self.n_max < 1:
            raise ValueError("truncations w_max and n_max must be >= 1")

    def rescaled(self, s: float) -> "CyclicKernelSpec":
        """Diffusive rescaling ``(T, beta) -> (s T, s^2 beta)``."""
        return CyclicKernelSpec(s * self.period, s * s * self.beta, self.w_max, self.n_max)


def reduce_angle(theta, period: float):
    """Map onto ``[-T/2, T/2)``."""
    theta = np.asarray(theta, dtype=float)
    return theta - period * np.floor(theta / period + 0.5)


def winding_tail_bound(spec: CyclicKernelSpec) -> float:
    """Bound on the omitted images ``|w| > w_max`` for a reduced angle."""
    a = spec.period ** 2 / (4.0 * spec.beta)
    W = spec.w_max
    lead = math.exp(-a * (W + 0.5) ** 2)
    return 2.0 * lead / math.sqrt(4.0 * math.pi * spec.beta) / -math.expm1(-2.0 * a * (W + 1))


def spectral_tail_bound(spec: CyclicKernelSpec) -> float:
    """Bound on the omitted modes ``n > n_max``."""
    b = spec.beta * (2.0 * math.pi / spec.period) ** 2
    N = spec.n_max
    return 2.0 / spec.period * math.exp(-b * (N + 1) ** 2) / -math.expm1(-b * (2 * N + 3))


def _winding_scalar(spec: CyclicKernelSpec, theta: float) -> float:
    T, beta = spec.period, spec.beta
    norm = 1.0 / math.sqrt(4.0 * math.pi * beta)
    terms = [math.exp(-theta * theta / (4.0 * beta))]
    for w in range(1, spec.w_max + 1):
        # pair w with -w so the sum is even in theta bit for bit
        terms.append(math.exp(-(theta + w * T) ** 2 / (4.0 * beta)) + math.exp(-(theta - w * T) ** 2 / (4.0 * beta)))
    return norm * math.fsum(terms)


def winding_kernel(spec: CyclicKernelSpec, theta):
    """Image sum ``sum_w (4 pi beta)^(-1/2) exp(-(theta + w T)^2 / (4 beta))``."""
    red = reduce_angle(theta, spec.period)
    out = np.array([_winding_scalar(spec, float(t)) for t in np.ravel(red)])
    return float(out[0]) if red.ndim == 0 else out.reshape(red.shape)


def _spectral_scalar(spec: CyclicKernelSpec, theta: float) -> float:
    T, beta = spec.period, spec.beta
    terms = [1.0]
    for n in range(1, spec.n_max + 1):
        k = 2.0 * math.pi * n / T
        terms.append(2.0 * math.exp(-beta * k * k) * math.cos(k * theta))
    return math.fsum(terms) / T


def spectral_kernel(spec: CyclicKernelSpec, theta):
    """Mode sum ``(1/T) [1 + 2 sum_n exp(-beta (2 pi n/T)^2) cos(2 pi n theta/T)]``."""
    red = reduce_angle(theta, spec.period)
    out = np.array([_spectral_scalar(spec, float(t)) for t in np.ravel(red)])
    return float(out[0]) if red.ndim == 0 else out.reshape(red.shape)


def lorentzian_kernel(spec: CyclicKernelSpec, t: float, theta, damping: float):
    """Spectral sum continued to ``beta -> damping + i t``.

    The undamped real-time sum does not converge, so ``damping`` must be
    positive; ``spec.beta`` is not used.
    """
    if not damping > 0:
        raise ValueError("real-time kernel requires a positive damping parameter")
    T = spec.period
    theta = np.asarray(theta, dtype=float)
    n = np.arange(1, spec.n_max + 1)
    k = 2.0 * np.pi * n / T
    weights = np.exp(-(damping + 1j * t) * k * k)
    modes = np.cos(np.multiply.outer(theta, k))
    return (1.0 + 2.0 * modes @ weights) / T


def periodic_convolution(f: np.ndarray, g: np.ndarray, period: float) -> np.ndarray:
    """``(f * g)(theta_j) = int_0^T f(s) g(theta_j - s) ds`` on a uniform periodic grid."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape or f.ndim != 1:
        raise ValueError("convolution needs two samples of equal 1D shape")
    h = period / f.size
    return np.real(np.fft.ifft(np.fft.fft(f) * np.fft.fft(g))) * h


@dataclass(frozen=True)
class KernelComparison:
    theta: np.ndarray
    winding: np.ndarray
    spectral: np.ndarray
    max_deviation: float
    tail_winding: float
    tail_spectral: float
    tolerance: float = EQUIVALENCE_TOL

    csv_header = ("theta", "winding", "spectral", "abs_diff")
    summary_header = ("max_diff", "tail_w", "tail_n", "verdict")

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def rows(self):
        for th, a, b in zip(self.theta, self.winding, self.spectral):
            yield float(th), float(a), float(b), abs(float(a) - float(b))

    def summary(self) -> dict:
        return {
            "max_diff": self.max_deviation,
            "tail_w": self.tail_winding,
            "tail_n": self.tail_spectral,
            "verdict": self.verdict,
        }

    def summary_line(self) -> str:
        s = self.summary()
        return ",".join(f"{k}={v!r}" if k != "verdict" else f"{k}={v}" for k, v in s.items())

    def to_csv(self, path: "str | Path") -> Path:
        return atomic_write_csv(path, self.csv_header, self.rows())

    def write_summary(self, path: "str | Path") -> Path:
        s = self.summary()
        return atomic_write_text(path, ",".join(self.summary_header) + "\n"
                                 + f"{s['max_diff']!r},{s['tail_w']!r},{s['tail_n']!r},{s['verdict']}\n")


def certify_equivalence(
    spec: CyclicKernelSpec,
    grid_points: int = 101,
    tolerance: float = EQUIVALENCE_TOL,
    tail_limit: float = TAIL_LIMIT,
) -> KernelComparison:
    """Evaluate both kernels on a uniform grid over ``[-T/2, T/2]`` and compare."""
    if grid_points < 2:
        raise ValueError("need at least two grid points")
    tw, tn = winding_tail_bound(spec), spectral_tail_bound(spec)
    if not tw < tail_limit:
        raise TruncationError(f"winding truncation w_max={spec.w_max} leaves tail {tw:.3e}", tw)
    if not tn < tail_limit:
        raise TruncationError(f"mode truncation n_max={spec.n_max} leaves tail {tn:.3e}", tn)
    theta = np.linspace(-0.5 * spec.period, 0.5 * spec.period, grid_points)
    # evaluate the right endpoint directly rather than through reduction
    wk = np.array([_winding_scalar(spec, float(t)) for t in theta])
    sk = np.array([_spectral_scalar(spec, float(t)) for t in theta])
    dev = float(np.max(np.abs(wk - sk)))
    return KernelComparison(theta, wk, sk, dev, tw, tn, tolerance)
