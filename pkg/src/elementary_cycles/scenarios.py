"""Scenario catalog for the command-line runner.

Each scenario declares its parameters (with units and defaults), runs one
computation through the library, and returns a summary, a list of checks
and the tables to write.  Parameters are validated before anything runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np
from scipy.constants import c as C_SI

from . import cyclic_propagator as cp
from . import kinematics as kin
from . import modulation as mod
from . import semiclassical as sc
from . import spectrum as spec
from . import topology as topo
from . import vxd

REQUIRED = object()
RNG_NAME = "numpy PCG64"


class ConfigError(ValueError):
    """Invalid scenario configuration (exit status 2)."""


class InputFileError(OSError):
    """Referenced input file missing or unreadable (exit status 4)."""


@dataclass(frozen=True)
class Param:
    name: str
    kind: str
    default: Any = REQUIRED
    units: str = "-"
    help: str = ""
    positive: bool = False

    @property
    def required(self) -> bool:
        return self.default is REQUIRED

    def convert(self, value):
        try:
            out = _CONVERTERS[self.kind](value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value for {self.name}: {exc}") from None
        if self.positive and out is not None and not out > 0:
            raise ConfigError(f"invalid value for {self.name}: must be positive")
        return out


def _number(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise TypeError(f"expected a number, got {v!r}")
    if not math.isfinite(v):
        raise ValueError(f"expected a finite number, got {v!r}")
    return float(v)


def _integer(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError(f"expected an integer, got {v!r}")
    return v


def _string(v) -> str:
    if not isinstance(v, str):
        raise TypeError(f"expected a string, got {v!r}")
    return v


def _vector(n):
    def conv(v):
        if n == 3 and not isinstance(v, (list, tuple)):
            return (_number(v), 0.0, 0.0)
        if not isinstance(v, (list, tuple)) or len(v) != n:
            raise TypeError(f"expected a list of {n} numbers, got {v!r}")
        return tuple(_number(x) for x in v)

    return conv


def _optional_number(v):
    return None if v is None else _number(v)


def _bc(v) -> spec.BoundaryCondition:
    return spec.BoundaryCondition.parse(_string(v))


_CONVERTERS: dict[str, Callable] = {
    "float": _number,
    "int": _integer,
    "str": _string,
    "path": _string,
    "vec3": _vector(3),
    "vec4": _vector(4),
    "bc": _bc,
    "float|null": _optional_number,
}


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    threshold: float
    relation: str = "<"

    def as_dict(self) -> dict:
        return {"name": self.name, "verdict": "PASS" if self.passed else "FAIL", "value": self.value,
                "threshold": self.threshold, "relation": self.relation}


def below(name: str, value: float, threshold: float) -> Check:
    value = float(value)
    return Check(name, bool(value < threshold), value, float(threshold))


@dataclass
class Table:
    filename: str
    header: tuple
    rows: list


@dataclass
class Outcome:
    summary: dict
    checks: list[Check]
    tables: list[Table] = field(default_factory=list)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    params: tuple[Param, ...]
    run: Callable[[dict, np.random.Generator], Outcome]
    rejected: tuple[str, ...] = ()
    rejected_reason: str = ""

    def validate(self, raw: dict) -> dict:
        if not isinstance(raw, dict):
            raise ConfigError("parameters must be a JSON object")
        known = {p.name for p in self.params}
        for key in sorted(raw):
            if key in self.rejected:
                raise ConfigError(f"unsupported key: {key} ({self.rejected_reason})")
            if key not in known:
                raise ConfigError(f"unknown key: {key}")
        out = {}
        for p in self.params:
            if p.name in raw:
                out[p.name] = p.convert(raw[p.name])
            elif p.required:
                raise ConfigError(f"missing key: {p.name}")
            else:
                out[p.name] = p.default
        out["_given"] = frozenset(raw)
        return out


def _read_input(path: str, loader):
    p = Path(path)
    if not p.is_file():
        raise InputFileError(f"input file not found: {path}")
    try:
        return loader(p)
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc}") from None
    except (ValueError, KeyError, StopIteration) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None


# spectrum ---------------------------------------------------------------

def _run_spectrum(p, rng):
    res = spec.harmonic_spectrum(p["m"], p["k"], p["n_max"], p["bc"])
    k = np.asarray(p["k"])
    direct = np.array([(n + p["bc"].offset) * math.sqrt(float(k @ k) + p["m"] ** 2) for n in range(1, p["n_max"] + 1)])
    scale = max(1.0, float(np.max(np.abs(direct))))
    checks = [below("omega_vs_direct_formula", np.max(np.abs(res.omega - direct)) / scale, 1e-12)]
    # each mode boosts like h_n times the boosted fundamental
    worst = 0.0
    for _ in range(p["boosts"]):
        b = kin.BoostParameters(_random_beta(rng, 0.99))
        fund = kin.boost(kin.FourVector(math.sqrt(float(k @ k) + p["m"] ** 2), *k), b).to_array()
        for h, w, kn in zip(res.harmonic, res.omega, res.momenta):
            mode = kin.boost(kin.FourVector(w, *kn), b).to_array()
            worst = max(worst, float(np.max(np.abs(mode - h * fund))) / max(1.0, float(np.max(np.abs(mode)))))
    checks.append(below("mode_boost_covariance", worst, 1e-12))
    summary = {"omega": res.omega.tolist(), "harmonic": res.harmonic.tolist(), "bc": res.bc.value}
    return Outcome(summary, checks, [Table("spectrum.csv", spec.SpectrumResult.csv_header, res.rows())])


def _random_beta(rng, vmax):
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    return tuple(direction * rng.uniform(0.0, vmax))


# boost ------------------------------------------------------------------

def _run_boost(p, rng):
    state = kin.PeriodState.from_spatial_momentum(p["m"], p["p"])
    b = kin.BoostParameters(p["beta"])
    moved = state.boosted(b)
    checks = [
        below("invariant_mass", abs(moved.momentum.norm2() - p["m"] ** 2) / max(1.0, moved.momentum.t ** 2), 1e-12),
        below("phase_harmony", kin.phase_harmony_residual(moved), 1e-10),
    ]
    rows = []
    worst = 0.0
    for i in range(p["samples"]):
        ratio = rng.uniform(-5.0, 5.0, size=3)
        s = kin.PeriodState.from_spatial_momentum(p["m"], p["m"] * ratio / math.sqrt(3.0))
        bb = kin.BoostParameters(_random_beta(rng, 0.99))
        sb = s.boosted(bb)
        r = kin.phase_harmony_residual(sb)
        worst = max(worst, r)
        rows.append((i, *bb.beta, *sb.momentum.to_array(), *sb.period.to_array(), r))
    checks.append(below("random_sweep_phase_harmony", worst, 1e-10))
    summary = {
        "momentum": moved.momentum.to_array().tolist(),
        "period": moved.period.to_array().tolist(),
        "gamma": b.gamma,
        "sweep_samples": p["samples"],
    }
    header = ("i", "beta_x", "beta_y", "beta_z", "k0", "k1", "k2", "k3", "T0", "T1", "T2", "T3", "harmony_residual")
    return Outcome(summary, checks, [Table("boost_sweep.csv", header, rows)])


# redshift ---------------------------------------------------------------

SOLAR_GM = 1.32712440018e20
SOLAR_RADIUS = 6.957e8


def _run_redshift(p, rng):
    gm = mod.geometrized_gm(p["GM"])
    r_obs = math.inf if p["r_obs"] is None else p["r_obs"]
    z = mod.gravitational_redshift(gm, p["r_emit"], r_obs)
    oracle = p["GM"] / C_SI ** 2 * ((0.0 if math.isinf(r_obs) else 1.0 / r_obs) - 1.0 / p["r_emit"])
    checks = [below("shift_vs_oracle", abs(z - oracle) / abs(oracle) if oracle else abs(z), 1e-12)]
    base = kin.PeriodState.from_spatial_momentum(p["m"], tuple(rng.uniform(-1.0, 1.0, size=3)))
    eps = np.logspace(-5, -2, 4)
    residuals = [mod.newtonian_modulation(e, base, (1.0, 0.0, 0.0)).harmony_residual for e in eps]
    order = mod.convergence_order(eps, residuals)
    checks.append(Check("harmony_residual_exponent", abs(order - 2.0) <= 0.1, order, 0.1, "|x-2|<="))
    rows = list(zip(eps.tolist(), residuals))
    summary = {"fractional_shift": z, "surface_strength": mod.weak_field_strength(gm, p["r_emit"]),
               "harmony_exponent": order}
    return Outcome(summary, checks, [Table("harmony_scaling.csv", ("eps", "harmony_residual"), rows)])


# gauge_phase ------------------------------------------------------------

def _quadratic_pure_gauge(charge):
    # A = grad(Theta), Theta = 0.3 x^2 + 0.5 x y - 0.2 y^2 + 0.1 x + 0.4 t x
    def grad(pts):
        t, x, y = pts[:, 0], pts[:, 1], pts[:, 2]
        return np.stack([0.4 * x, 0.6 * x + 0.5 * y + 0.1 + 0.4 * t, 0.5 * x - 0.4 * y, 0.0 * x], axis=1)

    axis = np.linspace(-1.0, 1.0, 21)
    return mod.GaugeField.from_function(grad, t=np.linspace(0.0, 1.0, 5), x=axis, y=axis, charge=charge)


def _random_loop(rng, A, vertices=5):
    corners = []
    for _ in range(vertices):
        pt = []
        for (lo, hi) in A.bounds:
            if hi > lo:
                pad = 0.05 * (hi - lo)
                pt.append(rng.uniform(lo + pad, hi - pad))
            else:
                pt.append(lo)
        corners.append(pt)
    corners.append(corners[0])
    return np.array(corners)


def _run_gauge_phase(p, rng):
    builtin = p["field"] is None
    if builtin:
        A = _quadratic_pure_gauge(p["charge"])
    else:
        A = _read_input(p["field"], lambda f: mod.GaugeField.from_csv(f, p["charge"]))
    rows = []
    worst = 0.0
    for i in range(p["loops"]):
        loop = _random_loop(rng, A)
        phase = mod.wilson_line_phase(A, loop, p["subdivisions"])
        back = mod.wilson_line_phase(A, loop[::-1], p["subdivisions"])
        rows.append((i, phase, back))
        worst = max(worst, abs(phase) if builtin else abs(phase + back))
    checks = [below("pure_gauge_loop_phase" if builtin else "loop_reversal_antisymmetry", worst, 1e-9)]
    base = kin.PeriodState.from_spatial_momentum(p["m"], (0.3, 0.2, 0.0))
    hs = [1e-2, 5e-3, 2.5e-3]
    res = [mod.tuning_check(A, base, h=h).max_residual for h in hs]
    if min(res) > 0:
        order = mod.convergence_order(hs, res)
        checks.append(Check("tuning_convergence_order", abs(order - 2.0) <= 0.2, order, 0.2, "|x-2|<="))
    else:
        order = math.inf
        checks.append(below("tuning_residual", max(res), 1e-12))
    summary = {"field": "quadratic pure gauge" if builtin else p["field"], "max_loop_residual": worst,
               "tuning_residuals": res, "tuning_order": order}
    return Outcome(summary, checks, [
        Table("loops.csv", ("loop", "phase", "reversed_phase"), rows),
        Table("tuning.csv", ("h", "max_residual"), list(zip(hs, res))),
    ])


# bohr_sommerfeld --------------------------------------------------------

_POTENTIAL_KEYS = {
    "harmonic": {"mass", "omega"},
    "coulomb": {"mass", "coupling", "angular"},
    "square_well": {"mass", "width"},
    "tabulated": {"mass", "file"},
}
_POTENTIAL_OPTIONAL = {"mass", "omega", "coupling", "angular", "width", "file"}


def _run_bohr_sommerfeld(p, rng):
    kind = p["potential"]
    if kind not in _POTENTIAL_KEYS:
        raise ConfigError(f"invalid value for potential: {kind!r} (choose from {', '.join(sorted(_POTENTIAL_KEYS))})")
    for key in sorted(_POTENTIAL_OPTIONAL - _POTENTIAL_KEYS[kind]):
        if key in p["_given"]:
            raise ConfigError(f"key not used by potential {kind}: {key}")
    m = p["mass"]
    bc = p["bc"]
    oracle = None
    rel = False
    if kind == "harmonic":
        pot = sc.HarmonicOscillator(m, p["omega"])
        oracle = lambda n: (n + bc.offset) * p["omega"]
    elif kind == "coulomb":
        pot = sc.Coulomb(m, p["coupling"], p["angular"])
        if bc is spec.BoundaryCondition.PBC:
            oracle, rel = (lambda n: -m * p["coupling"] ** 2 / (2.0 * n * n)), True
    elif kind == "square_well":
        pot = sc.SquareWell(m, p["width"])
        oracle = lambda n: (math.pi * (n + bc.offset)) ** 2 / (2.0 * m * p["width"] ** 2)
    else:
        if p["file"] is None:
            raise ConfigError("missing key: file")
        pot = _read_input(p["file"], lambda f: sc.Tabulated.from_csv(f, m))
    n_min = p["n_min"] if p["n_min"] is not None else (p["angular"] if kind == "coulomb" else 1)
    levels = sc.bohr_sommerfeld_levels(pot, n_min, p["n_max"], bc)
    action_res = max(abs(lv.action_value - pot.target_action(lv.n, bc)) for lv in levels)
    checks = [below("action_residual", action_res, 1e-9)]
    energies = [lv.energy for lv in levels]
    gaps = np.diff(energies)
    checks.append(Check("strictly_increasing", bool(np.all(gaps > 0)), float(np.min(gaps)) if len(gaps) else 0.0,
                        0.0, ">"))
    if oracle is not None:
        if rel:
            dev = max(abs(lv.energy / oracle(lv.n) - 1.0) for lv in levels)
            checks.append(below("levels_vs_oracle_relative", dev, 1e-3))
        else:
            dev = max(abs(lv.energy - oracle(lv.n)) for lv in levels)
            checks.append(below("levels_vs_oracle", dev, 1e-8))
    summary = {"potential": kind, "bc": bc.value, "energies": energies}
    return Outcome(summary, checks, [Table("levels.csv", sc.LevelResult.csv_header, [lv.row() for lv in levels])])


# cyclic_kernel ----------------------------------------------------------

def _run_cyclic_kernel(p, rng):
    ks = cp.CyclicKernelSpec(p["T"], p["beta"], p["w_max"], p["n_max"])
    cmp_ = cp.certify_equivalence(ks, p["grid_points"], p["tolerance"])
    checks = [
        below("max_winding_spectral_deviation", cmp_.max_deviation, p["tolerance"]),
        Check("winding_kernel_positive", bool(np.all(cmp_.winding > 0)), float(np.min(cmp_.winding)), 0.0, ">"),
    ]
    s = cmp_.summary()
    summary = {"max_diff": s["max_diff"], "tail_w": s["tail_w"], "tail_n": s["tail_n"], "verdict": s["verdict"]}
    return Outcome(summary, checks, [
        Table("kernel.csv", cp.KernelComparison.csv_header, list(cmp_.rows())),
        Table("kernel_summary.csv", cp.KernelComparison.summary_header,
              [(s["max_diff"], s["tail_w"], s["tail_n"], s["verdict"])]),
    ])


# dirac_check / flux_check ----------------------------------------------

def _loop_table(loop: topo.LoopSamples, value_names):
    vals = loop.values.reshape(len(loop), -1)
    rows = [(i, *loop.positions[i], *vals[i]) for i in range(len(loop))]
    return ("index", "x", "y", "z", *value_names), rows


def _run_dirac(p, rng):
    if p["loop"] is None:
        pts = topo.circle_loop((0.0, 0.0, p["z"]), p["radius"], p["samples"])
        loop = topo.LoopSamples.from_vector_field(pts, topo.monopole_potential(p["g"]))
    else:
        loop = _read_input(p["loop"], topo.load_loop_csv)
    e = p["e"] if p["e"] is not None else 1.0 / (2.0 * p["g"])
    v = topo.dirac_quantization_check(loop, e)
    checks = [below("dirac_residual", v.residual, p["tolerance"]),
              Check("quantization_verdict", v.passed, v.residual / v.unit, topo.ROUNDING_TOL)]
    header, rows = _loop_table(loop, ("Ax", "Ay", "Az"))
    summary = {"raw": v.raw, "unit": v.unit, "n": v.n, "residual": v.residual, "charge_e": e}
    return Outcome(summary, checks, [Table("loop.csv", header, rows),
                                     Table("verdict.csv", topo.QuantizationVerdict.csv_header, [v.row()])])


def _run_flux(p, rng):
    if p["loop"] is None:
        pts = topo.circle_loop(tuple(p["center"]), p["radius"], p["samples"])
        loop = topo.LoopSamples.from_phase_field(pts, topo.vortex_phase([(0.0, 0.0)], [p["winding"]]))
        expected = p["winding"]
    else:
        loop = _read_input(p["loop"], topo.load_loop_csv)
        expected = None
    v = topo.flux_quantization_check(loop, p["e"])
    checks = [below("stokes_mismatch", v.stokes_residual, topo.STOKES_TOL * max(1, abs(v.n))),
              Check("quantization_verdict", v.passed, v.residual / v.unit, topo.ROUNDING_TOL)]
    if expected is not None:
        inside = math.hypot(*p["center"][:2]) < p["radius"]
        want = expected if inside else 0
        checks.append(Check("winding_matches_vortex", v.n == want, float(v.n), float(want), "=="))
    header, rows = _loop_table(loop, ("theta",))
    summary = {"flux": v.raw, "unit": v.unit, "n": v.n, "residual": v.residual, "stokes_mismatch": v.stokes_residual}
    return Outcome(summary, checks, [Table("loop.csv", header, rows),
                                     Table("verdict.csv", topo.QuantizationVerdict.csv_header, [v.row()])])


# kk_tower ---------------------------------------------------------------

def _run_kk_tower(p, rng):
    cd = vxd.CompactDimensionSpec(p["length"], p["bc"])
    tower = vxd.kk_tower(cd, p["n_max"])
    rest = spec.harmonic_spectrum(cd.fundamental_mass, (0.0, 0.0, 0.0), p["n_max"], p["bc"])
    dev = float(np.max(np.abs(tower.omega - rest.omega)))
    checks = [below("tower_vs_rest_spectrum", dev, 1e-12)]
    summary = {"masses": tower.omega.tolist(), "fundamental_mass": cd.fundamental_mass, "bc": cd.bc.value}
    return Outcome(summary, checks, [Table("kk_tower.csv", ("n", "mass", "rest_omega"),
                                           [(int(n), float(a), float(b)) for n, a, b in
                                            zip(tower.n, tower.omega, rest.omega)])])


# freezeout --------------------------------------------------------------

def _run_freezeout(p, rng):
    scheme = vxd.FreezeoutScheme(p["K"], kin.FourVector(*p["k"]), p["s_min"], p["s_max"])
    scan = vxd.freezeout_scan(scheme, p["points"])
    prod = float(np.max(np.abs(scan.energy * scan.period - 2.0 * math.pi)))
    warp = float(np.max(np.abs(scan.warp - (scan.energy / scan.energy[0]) ** 2)))
    checks = [
        below("energy_period_product", prod, 1e-12),
        below("warp_vs_energy_ratio", warp, 1e-12),
        below("null_interval_residual", float(np.max(np.abs(scan.interval_residual))), 1e-12),
        Check("monotonic_cooling", bool(np.all(np.diff(scan.energy) < 0) and np.all(np.diff(scan.period) > 0)),
              float(np.max(np.diff(scan.energy))), 0.0, "<"),
    ]
    summary = {"E_initial": float(scan.energy[0]), "E_final": float(scan.energy[-1]),
               "normalization": vxd.ENERGY_NORMALIZATION}
    return Outcome(summary, checks, [Table("freezeout.csv", vxd.FreezeoutScan.csv_header, list(scan.rows()))])


BC_HELP = "boundary condition PBC or AntiPBC"

SCENARIOS: dict[str, Scenario] = {s.name: s for s in [
    Scenario("spectrum", "harmonic energy tower of a free state", (
        Param("m", "float", units="energy", help="mass"),
        Param("k", "vec3", (0.0, 0.0, 0.0), "energy", "spatial momentum (scalar means x component)"),
        Param("n_max", "int", 3, help="highest harmonic", positive=True),
        Param("bc", "bc", spec.BoundaryCondition.PBC, help=BC_HELP),
        Param("boosts", "int", 16, help="random boosts for the covariance check"),
    ), _run_spectrum),
    Scenario("boost", "Lorentz boost of a period state and a seeded phase-harmony sweep", (
        Param("m", "float", 1.0, "energy", "mass", positive=True),
        Param("p", "vec3", (0.0, 0.0, 0.0), "energy", "spatial momentum"),
        Param("beta", "vec3", (0.6, 0.0, 0.0), "c", "boost velocity (scalar means x)"),
        Param("samples", "int", 1000, help="random states in the sweep"),
    ), _run_boost),
    Scenario("redshift", "weak-field gravitational redshift and modulation scaling", (
        Param("GM", "float", SOLAR_GM, "m^3/s^2", "gravitational parameter", positive=True),
        Param("r_emit", "float", SOLAR_RADIUS, "m", "emitter radius", positive=True),
        Param("r_obs", "float|null", None, "m", "observer radius (null for infinity)", positive=True),
        Param("m", "float", 1.0, "energy", "mass of the probe state", positive=True),
    ), _run_redshift),
    Scenario("gauge_phase", "Wilson loop phases and the gauge tuning check", (
        Param("field", "path", None, help="gauge field CSV (x,y,z,t,A0..A3); default is a built-in pure gauge"),
        Param("charge", "float", 1.0, "e", "coupling"),
        Param("loops", "int", 20, help="random closed loops", positive=True),
        Param("subdivisions", "int", 64, help="quadrature subdivisions per segment", positive=True),
        Param("m", "float", 1.0, "energy", "mass of the probe state", positive=True),
    ), _run_gauge_phase),
    Scenario("bohr_sommerfeld", "semiclassical bound-state levels", (
        Param("potential", "str", "harmonic", help="harmonic, coulomb, square_well or tabulated"),
        Param("mass", "float", 1.0, "energy", "particle mass", positive=True),
        Param("omega", "float", 1.0, "energy", "oscillator frequency", positive=True),
        Param("coupling", "float", 1.0, "-", "Coulomb coupling", positive=True),
        Param("angular", "int", 1, help="Coulomb angular number l + 1", positive=True),
        Param("width", "float", math.pi, "1/energy", "square well width", positive=True),
        Param("file", "path", None, help="tabulated potential CSV (x, V)"),
        Param("n_min", "int", None, help="lowest level (default 1, or angular for coulomb)", positive=True),
        Param("n_max", "int", 10, help="highest level", positive=True),
        Param("bc", "bc", spec.BoundaryCondition.PBC, help=BC_HELP),
    ), _run_bohr_sommerfeld),
    Scenario("cyclic_kernel", "winding vs spectral heat kernel on a time circle", (
        Param("T", "float", 1.0, "time", "period", positive=True),
        Param("beta", "float", 0.05, "time^2", "diffusion parameter", positive=True),
        Param("w_max", "int", 12, help="winding truncation", positive=True),
        Param("n_max", "int", 64, help="mode truncation", positive=True),
        Param("grid_points", "int", 101, help="evaluation points", positive=True),
        Param("tolerance", "float", cp.EQUIVALENCE_TOL, help="pass threshold on max deviation", positive=True),
    ), _run_cyclic_kernel),
    Scenario("dirac_check", "Dirac quantization on a loop around a monopole", (
        Param("loop", "path", None, help="loop CSV (index,x,y,z,Ax,Ay,Az); default is a monopole circle"),
        Param("g", "float", 1.0, "-", "monopole strength", positive=True),
        Param("e", "float|null", None, "-", "electric charge (default 1/(2g))", positive=True),
        Param("radius", "float", 1.0, "length", "loop radius", positive=True),
        Param("z", "float", 0.0, "length", "loop height above the monopole"),
        Param("samples", "int", 256, help="loop samples", positive=True),
        Param("tolerance", "float", 1e-3, help="residual threshold", positive=True),
    ), _run_dirac),
    Scenario("flux_check", "flux quantization from a vortex phase winding", (
        Param("loop", "path", None, help="loop CSV (index,x,y,z,theta); default is a circle around a vortex"),
        Param("winding", "int", 1, help="vortex charge"),
        Param("e", "float", 1.0, "-", "charge", positive=True),
        Param("center", "vec3", (0.0, 0.0, 0.0), "length", "loop centre"),
        Param("radius", "float", 1.0, "length", "loop radius", positive=True),
        Param("samples", "int", 256, help="loop samples", positive=True),
    ), _run_flux),
    Scenario("kk_tower", "compact-dimension mass tower and its rest-spectrum dual", (
        Param("length", "float", 2 * math.pi, "1/energy", "compactification length", positive=True),
        Param("n_max", "int", 32, help="highest mode", positive=True),
        Param("bc", "bc", spec.BoundaryCondition.PBC, help=BC_HELP),
    ), _run_kk_tower),
    Scenario("freezeout", "conformal cooling scan with warped-interval check", (
        Param("K", "float", 1.0, "1/s", "cooling gradient", positive=True),
        Param("k", "vec4", (1.0, 1.0, 0.0, 0.0), "energy", "initial nearly-null four-momentum"),
        Param("s_min", "float", 0.0, "s", "scan start"),
        Param("s_max", "float", 5.0, "s", "scan end"),
        Param("points", "int", 1000, help="scan points", positive=True),
    ), _run_freezeout, rejected=("dilaton", "softwall", "soft_wall", "mixing"),
        rejected_reason="dilaton, soft-wall and mixing corrections are not modelled"),
]}


def resolve(name) -> Scenario:
    if not isinstance(name, str):
        raise ConfigError("scenario must be a string")
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario: {name}")
    return SCENARIOS[name]


def run(scenario: Scenario, params: dict, seed: int) -> Outcome:
    rng = np.random.Generator(np.random.PCG64(seed))
    return scenario.run(params, rng)


def catalog_lines() -> list[str]:
    lines = []
    for name in sorted(SCENARIOS):
        s = SCENARIOS[name]
        lines.append(f"{name}: {s.description}")
        for p in sorted(s.params, key=lambda q: (not q.required, q.name)):
            if p.required:
                status = "required"
            else:
                status = f"optional, default {_show(p.default)}"
            lines.append(f"  {p.name} [{p.kind}, units {p.units}] {status}: {p.help}")
        for key in s.rejected:
            lines.append(f"  {key} rejected: {s.rejected_reason}")
    return lines


def _show(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, spec.BoundaryCondition):
        return v.value
    if isinstance(v, tuple):
        return "[" + ", ".join(repr(x) for x in v) + "]"
    return repr(v)
