import math

import numpy as np
import pytest
from scipy.constants import c, hbar, m_e, physical_constants

from elementary_cycles.errors import DispersionError, DomainError
from elementary_cycles.kinematics import FourVector, si_compton_time
from elementary_cycles.spectrum import BoundaryCondition, SpectrumResult, harmonic_spectrum
from elementary_cycles.vxd import (
    CompactDimensionSpec,
    FreezeoutScheme,
    effective_mass_from_compactification,
    effective_mass_si,
    freezeout_evolution,
    freezeout_scan,
    kk_tower,
    null_interval_check,
)

ELECTRON_EV = physical_constants["electron mass energy equivalent in MeV"][0] * 1e6


def photon(w=3.0):
    return FourVector(w, 0.0, w, 0.0)


def test_tower_unit_circumference():
    tower = kk_tower(CompactDimensionSpec(2 * math.pi), 3)
    assert isinstance(tower, SpectrumResult)
    assert tower.omega.tolist() == pytest.approx([1, 2, 3], abs=1e-15)
    assert not tower.momenta.any()


def test_tower_first_mode_lambda_pi():
    assert kk_tower(CompactDimensionSpec(math.pi), 1).omega[0] == 2.0


def test_tower_antiperiodic():
    tower = kk_tower(CompactDimensionSpec(2 * math.pi, "AntiPBC"), 3)
    assert tower.omega.tolist() == pytest.approx([1.5, 2.5, 3.5], abs=1e-15)
    assert tower.bc is BoundaryCondition.ANTI_PBC


@pytest.mark.parametrize("length", [0.1, 1.0, 2 * math.pi, 100.0])
@pytest.mark.parametrize("bc", ["PBC", "AntiPBC"])
def test_tower_duality(length, bc):
    tower = kk_tower(CompactDimensionSpec(length, bc), 32)
    rest = harmonic_spectrum(2 * math.pi / length, (0, 0, 0), 32, bc)
    assert np.max(np.abs(tower.omega - rest.omega)) < 1e-12
    assert np.array_equal(tower.n, rest.n)
    assert np.array_equal(tower.harmonic, rest.harmonic)


def test_compact_spec_validation():
    for bad in (0.0, -1.0, math.inf):
        with pytest.raises(DomainError):
            CompactDimensionSpec(bad)
    with pytest.raises(ValueError):
        kk_tower(CompactDimensionSpec(1.0), 0)


def test_effective_mass():
    assert effective_mass_from_compactification(2 * math.pi) == 1.0
    for circ in (0.3, 2.0, 17.0):
        assert effective_mass_from_compactification(circ / 2) == 2 * effective_mass_from_compactification(circ)
    with pytest.raises(DomainError):
        effective_mass_from_compactification(0.0)


def test_electron_from_compton_circumference():
    lam_natural = 2 * math.pi / ELECTRON_EV
    assert effective_mass_from_compactification(lam_natural) == pytest.approx(ELECTRON_EV, rel=1e-7)
    # SI: period 2 pi hbar / (m c^2) inverts to m_e
    period = 2 * math.pi * hbar / (m_e * c ** 2)
    assert effective_mass_si(period) == pytest.approx(m_e, rel=1e-7)
    assert effective_mass_si(si_compton_time(m_e)) == pytest.approx(m_e, rel=1e-12)


def test_scheme_validation():
    with pytest.raises(DispersionError):
        FreezeoutScheme(1.0, FourVector(1.0, 0.5, 0, 0))
    with pytest.raises(DomainError):
        FreezeoutScheme(-1.0, photon())
    with pytest.raises(DomainError):
        FreezeoutScheme(1.0, photon(), 2.0, 1.0)
    with pytest.raises(DomainError):
        FreezeoutScheme(1.0, FourVector(-1.0, 1.0, 0, 0))
    # nearly null is fine
    FreezeoutScheme(1.0, FourVector(1.0, 0.9999, 0, 0))


def test_initial_condition():
    st = freezeout_evolution(FreezeoutScheme(0.7, photon()), 0.0)
    assert st.momentum == photon()
    assert st.warp_factor == 1.0
    assert st.raw_energy == 3.0


def test_ln2_halving():
    scheme = FreezeoutScheme(1.0, photon(4.0))
    st = freezeout_evolution(scheme, math.log(2))
    assert st.momentum.to_array() == pytest.approx([2.0, 0, 2.0, 0], abs=1e-15)
    base = freezeout_evolution(scheme, 0.0)
    assert st.period.t == pytest.approx(2 * base.period.t, rel=1e-15)
    assert st.period.y == pytest.approx(2 * base.period.y, rel=1e-15)
    assert math.isinf(st.period.x)
    assert st.warp_factor == pytest.approx(0.25, rel=1e-15)
    assert st.conformal_time_period == pytest.approx(2.0, rel=1e-15)


def test_energy_period_product_and_warp():
    scheme = FreezeoutScheme(0.8, photon(), 0.0, 4.0)
    e0 = freezeout_evolution(scheme, 0.0).energy
    for s in np.linspace(0, 4, 57):
        st = freezeout_evolution(scheme, float(s))
        assert abs(st.energy * st.conformal_time_period - 2 * math.pi) < 1e-12
        assert abs(st.warp_factor - (st.energy / e0) ** 2) < 1e-12
        assert "2*pi*K" in st.normalization


def test_reciprocity_componentwise():
    k = FourVector(5.0, 3.0, 4.0, 0.0)
    scheme = FreezeoutScheme(0.5, k, 0.0, 3.0)
    for s in (0.0, 0.4, 2.9):
        st = freezeout_evolution(scheme, s)
        prod = st.momentum.to_array()[:3] * st.period.to_array()[:3]
        assert np.allclose(prod, 2 * math.pi, rtol=1e-12)


def test_monotonic_cooling():
    scan = freezeout_scan(FreezeoutScheme(1.3, photon(), 0.0, 2.0), 200)
    assert np.all(np.diff(scan.energy) < 0)
    assert np.all(np.diff(scan.period) > 0)


def test_domain_checks():
    scheme = FreezeoutScheme(1.0, photon(), 0.0, 1.0)
    with pytest.raises(DomainError):
        freezeout_evolution(scheme, 1.5)
    with pytest.raises(DomainError):
        freezeout_evolution(FreezeoutScheme(0.0, photon()), 0.5)


def test_null_interval():
    scheme = FreezeoutScheme(0.9, photon())
    # null displacement: only -ds^2 survives
    assert null_interval_check(scheme, FourVector(1.0, 1.0, 0, 0), 0.3, 1.2) == -0.3 * 0.3
    # dx.dx = exp(2 K s) ds^2
    s, ds = 1.7, 0.01
    dx = FourVector(math.exp(0.9 * s) * ds, 0, 0, 0)
    assert abs(null_interval_check(scheme, dx, ds, s)) < 1e-12


def test_null_interval_flat_limit():
    flat = FreezeoutScheme(0.0, photon())
    dx = FourVector(2.0, 1.0, 0.5, 0.0)
    assert null_interval_check(flat, dx, 0.7, 3.0) == pytest.approx(dx.norm2() - 0.49, abs=1e-15)


def test_scan_csv(tmp_path):
    scheme = FreezeoutScheme(1.0, photon(), 0.0, 3.0)
    scan = freezeout_scan(scheme, 1000)
    assert len(scan.s) == 1000
    assert np.max(np.abs(scan.energy * scan.period - 2 * math.pi)) < 1e-12
    assert np.max(np.abs(scan.warp - (scan.energy / scan.energy[0]) ** 2)) < 1e-12
    assert np.max(np.abs(scan.interval_residual)) < 1e-12
    lines = scan.to_csv(tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "s,E,T,warp,dS2_residual"
    assert len(lines) == 1001
