import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elementary_cycles.errors import CommensurabilityError, InfinitePeriodError
from elementary_cycles.kinematics import BoostParameters, FourVector, PeriodState, boost
from elementary_cycles.spectrum import (
    BoundaryCondition,
    BoundaryTermWarning,
    HarmonicField,
    SpatialGrid,
    commutator_expectation,
    harmonic_spectrum,
    inner_product,
    norm2,
    synthesize,
)

PBC = BoundaryCondition.PBC
APBC = BoundaryCondition.ANTI_PBC


def moving_state(p=0.8, mass=1.0):
    return PeriodState.from_spatial_momentum(mass, (p, 0.0, 0.0))


def test_rest_spectrum_pbc():
    assert harmonic_spectrum(1.0, (0, 0, 0), 3, PBC).omega.tolist() == [1.0, 2.0, 3.0]


def test_rest_spectrum_antipbc():
    assert harmonic_spectrum(1.0, (0, 0, 0), 2, "AntiPBC").omega.tolist() == [1.5, 2.5]


def test_moving_spectrum():
    res = harmonic_spectrum(3.0, (4.0, 0, 0), 2)
    assert res.omega.tolist() == [5.0, 10.0]
    assert res.momenta[:, 0].tolist() == [4.0, 8.0]


def test_massless_at_rest_rejected():
    with pytest.raises(InfinitePeriodError):
        harmonic_spectrum(0.0, (0, 0, 0), 3)
    assert harmonic_spectrum(0.0, (0, 0, 2.0), 2).omega.tolist() == [2.0, 4.0]


def test_boundary_condition_parse():
    assert BoundaryCondition.parse("anti-pbc") is APBC
    assert BoundaryCondition.parse("pbc") is PBC
    with pytest.raises(ValueError):
        BoundaryCondition.parse("dirichlet")


def test_harmonic_ladder_spacing():
    res = harmonic_spectrum(0.7, (0.3, -1.1, 0.4), 40)
    np.testing.assert_allclose(np.diff(res.omega), res.omega[0], rtol=1e-13)
    assert np.all(np.diff(res.omega) > 0)
    np.testing.assert_allclose(res.omega / res.n, res.omega[0], rtol=1e-15)


def test_doppler_covariance():
    rng = np.random.default_rng(1)
    for _ in range(50):
        mass = rng.uniform(0.1, 3)
        b = BoostParameters(rng.uniform(-0.5, 0.5, size=3))
        moving = boost(FourVector(mass, 0, 0, 0), b)
        res = harmonic_spectrum(mass, moving.spatial, 8)
        for n, omega, k in zip(res.n, res.omega, res.momenta):
            mode = boost(FourVector(n * mass, 0, 0, 0), b)
            assert omega == pytest.approx(mode.t, rel=1e-10)
            np.testing.assert_allclose(k, mode.spatial, rtol=1e-10, atol=1e-10 * mass)


def test_synthesize_periodicity_rest():
    field = HarmonicField(PeriodState.at_rest(1.0), [1.0])
    origin = synthesize(field, FourVector(0, 0, 0, 0))
    assert synthesize(field, FourVector(2 * math.pi, 0, 0, 0)) == pytest.approx(origin, abs=1e-14)
    assert synthesize(field, FourVector(math.pi, 0, 0, 0)) == pytest.approx(-origin, abs=1e-14)


def test_synthesize_matches_term_by_term():
    state = moving_state()
    field = HarmonicField(state, [1.0, 1.0])
    T = state.period.to_array()
    w = state.momentum.t
    p = state.momentum.x
    for j in range(64):
        x = T * j / 64
        expected = sum(
            math.cos(n * (w * x[0] - p * x[1])) - 1j * math.sin(n * (w * x[0] - p * x[1])) for n in (1, 2)
        )
        assert synthesize(field, FourVector.from_array(x)) == pytest.approx(expected, abs=1e-13)


@pytest.mark.parametrize("bc", [PBC, APBC])
def test_field_is_periodic_over_period_fourvector(bc):
    rng = np.random.default_rng(4)
    state = PeriodState.from_spatial_momentum(1.3, (0.2, -0.5, 0.9))
    field = HarmonicField(state, rng.normal(size=6) + 1j * rng.normal(size=6), bc)
    x = rng.normal(size=(20, 4))
    shifted = synthesize(field, x + state.period.to_array())
    np.testing.assert_allclose(shifted, bc.sign * synthesize(field, x), atol=1e-10)


def test_inner_product_orthonormal():
    field = HarmonicField(moving_state(), [1, 1])
    grid = SpatialGrid.over_periods(field, 1, 256)
    assert inner_product(field.mode(1), field.mode(1), grid) == pytest.approx(1.0, abs=1e-9)
    assert abs(inner_product(field.mode(1), field.mode(2), grid)) < 1e-9


def test_inner_product_three_periods_agrees_with_refined_grid():
    field = HarmonicField(moving_state(), [1, 1])
    coarse = inner_product(field.mode(1), field.mode(2), SpatialGrid.over_periods(field, 3, 256))
    fine = inner_product(field.mode(1), field.mode(2), SpatialGrid.over_periods(field, 3, 512))
    assert abs(coarse) < 1e-9
    assert abs(coarse - fine) < 1e-9


def test_inner_product_rejects_incommensurate_grid():
    field = HarmonicField(moving_state(), [1])
    grid = SpatialGrid(1.5 * field.spatial_period, 64)
    with pytest.raises(CommensurabilityError):
        inner_product(field, field, grid)


def test_inner_product_requires_shared_base():
    f = HarmonicField(moving_state(0.8), [1])
    g = HarmonicField(moving_state(0.9), [1])
    with pytest.raises(ValueError):
        inner_product(f, g, SpatialGrid.over_periods(f, 1, 32))


@settings(max_examples=40, deadline=None)
@given(
    n_modes=st.integers(1, 16),
    seed=st.integers(0, 2 ** 32 - 1),
    bc=st.sampled_from([PBC, APBC]),
)
def test_parseval(n_modes, seed, bc):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
    field = HarmonicField(moving_state(0.6), c, bc, normalization=0.7)
    grid = SpatialGrid.over_periods(field, 2, 128)
    assert norm2(field, grid) == pytest.approx(float(np.sum(np.abs(0.7 * c) ** 2)), rel=1e-8)


def trig_poly(coeffs_cos, coeffs_sin, q):
    def F(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        for d, (a, b) in enumerate(zip(coeffs_cos, coeffs_sin)):
            out = out + a * np.cos(d * q * s) + b * np.sin(d * q * s)
        return out

    return F


def fourier_oracle(c, harmonics, coeffs_cos, coeffs_sin, q):
    """Commutator expectation from the exact Fourier coefficients of F."""
    F_hat = {}
    for d, (a, b) in enumerate(zip(coeffs_cos, coeffs_sin)):
        if d == 0:
            F_hat[0] = F_hat.get(0, 0) + a
            continue
        F_hat[d] = F_hat.get(d, 0) + a / 2 + b / (2j)
        F_hat[-d] = F_hat.get(-d, 0) + a / 2 - b / (2j)
    total = 0j
    for i, hn in enumerate(harmonics):
        for j, hm in enumerate(harmonics):
            d = round(hm - hn)
            total += np.conj(c[j]) * c[i] * (hn - hm) * q * F_hat.get(d, 0)
    return total


def test_commutator_constant_function():
    field = HarmonicField(moving_state(), [1, 0.5j])
    res = commutator_expectation(lambda s: np.full_like(s, 3.0), field, SpatialGrid.over_periods(field, 1, 64))
    assert abs(res.lhs) < 1e-10 and abs(res.rhs) < 1e-10


def test_commutator_cos_single_mode():
    field = HarmonicField(moving_state(), [1])
    lam = field.spatial_period
    res = commutator_expectation(lambda s: np.cos(2 * np.pi * s / lam), field, SpatialGrid.over_periods(field, 1, 512))
    assert res.lhs == pytest.approx(res.rhs, abs=1e-8)
    assert res.lhs == pytest.approx(0.0, abs=1e-12)


def test_commutator_two_mode_against_refined_quadrature():
    field = HarmonicField(moving_state(), [1, 0.6 - 0.2j])
    lam = field.spatial_period
    F = lambda s: np.sin(4 * np.pi * s / lam) + 0.3 * np.cos(2 * np.pi * s / lam)
    res = commutator_expectation(F, field, SpatialGrid.over_periods(field, 1, 128))
    fine = commutator_expectation(F, field, SpatialGrid.over_periods(field, 1, 512))
    assert res.lhs == pytest.approx(res.rhs, abs=1e-8)
    assert res.lhs == pytest.approx(fine.rhs, abs=1e-8)
    # analytic: only the difference frequency q couples modes 1 and 2 through the cos term
    assert abs(res.lhs) > 1e-3


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n_modes=st.integers(1, 16), degree=st.integers(0, 8),
       bc=st.sampled_from([PBC, APBC]))
def test_commutator_matches_fourier_oracle(seed, n_modes, degree, bc):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
    a = rng.normal(size=degree + 1)
    b = rng.normal(size=degree + 1)
    b[0] = 0.0
    field = HarmonicField(moving_state(0.9), c, bc)
    q = field.spatial_wavenumber
    res = commutator_expectation(trig_poly(a, b, q), field, SpatialGrid.over_periods(field, 1, 128))
    expected = fourier_oracle(c, field.harmonics, a, b, q)
    scale = max(1.0, abs(expected))
    assert abs(res.lhs - res.rhs) < 1e-7 * scale
    assert abs(res.lhs - expected) < 1e-7 * scale


def test_commutator_warns_on_non_periodic_function():
    field = HarmonicField(moving_state(), [1, 1])
    with pytest.warns(BoundaryTermWarning):
        res = commutator_expectation(lambda s: s, field, SpatialGrid.over_periods(field, 1, 64))
    assert res.boundary_residual == pytest.approx(field.spatial_period * 4, rel=1e-9)


def test_commutator_periodic_function_no_warning():
    field = HarmonicField(moving_state(), [1])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        commutator_expectation(lambda s: np.sin(field.spatial_wavenumber * s), field,
                               SpatialGrid.over_periods(field, 2, 64))
