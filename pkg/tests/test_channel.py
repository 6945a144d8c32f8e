import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from nucorr.channel import (
    GAMMA_90_GEV,
    SIGMA3_FIRST,
    LindbladSpec,
    XState,
    apply_dephasing,
    apply_kraus,
    benchmark_gamma,
    build_state,
    gamma_from_lindblad,
    km_to_inverse_gev,
    kraus_operators,
)
from nucorr.errors import DomainError
from nucorr.oscillation import FlavorAmplitudes, MixingSector, amplitudes

unit = st.floats(min_value=0.0, max_value=1.0)


def block_matrix(state):
    m = np.zeros((4, 4), dtype=complex)
    m[1, 1], m[2, 2] = state.rho22, state.rho33
    m[1, 2], m[2, 1] = state.rho23, np.conj(state.rho23)
    return m


def test_km_conversion():
    assert km_to_inverse_gev(0.0) == 0.0
    assert km_to_inverse_gev(1.0) == 5.07e18
    assert km_to_inverse_gev(735.0) == pytest.approx(3.72645e21, rel=1e-12)
    with pytest.raises(DomainError):
        km_to_inverse_gev(-1.0)


@pytest.mark.parametrize("L, table_value", [(180.0, 4.6e-3), (735.0, 1.9e-2), (1.912, 4.9e-5)])
def test_gamma_table_rows(L, table_value):
    g = gamma_from_lindblad(LindbladSpec(GAMMA_90_GEV), 1.0, L)
    assert abs(g - table_value) / table_value < 0.02
    assert benchmark_gamma(1.0, L) == g


def test_benchmark_gamma():
    assert benchmark_gamma(0.0, 735.0) == 0.0
    assert benchmark_gamma(0.5, 180.0) == pytest.approx(1 - math.exp(-0.5 * 5.1e-24 * 180 * 5.07e18), rel=1e-12)
    assert benchmark_gamma(0.5, 180.0) == pytest.approx(2.3244e-3, rel=1e-4)
    with pytest.raises(DomainError):
        benchmark_gamma(1.5, 10.0)


def test_energy_power_law():
    spec = LindbladSpec(1e-23, exponent_n=2, e0_gev=1.0)
    g = gamma_from_lindblad(spec, 3.0, 100.0)
    assert g == pytest.approx(1 - math.exp(-1e-23 * 9 * 100 * 5.07e18), rel=1e-12)
    with pytest.raises(DomainError):
        LindbladSpec(-1.0)


def test_build_state_examples():
    s = build_state(FlavorAmplitudes(1.0, 0.0))
    assert (s.rho22, s.rho33, s.rho23, s.gamma) == (0.0, 1.0, 0.0, 0.0)
    s = build_state(amplitudes(MixingSector(math.pi / 4, 1e-3), math.pi / 2))
    assert s.rho22 == pytest.approx(1.0) and s.rho33 == pytest.approx(0.0, abs=1e-15)
    assert abs(s.rho23) < 1e-15
    with pytest.raises(DomainError):
        build_state(FlavorAmplitudes(1.0, 0.5))


def test_build_state_saturates_positivity(rng):
    for th, phi in zip(rng.uniform(0, math.pi / 2, 500), rng.uniform(0, math.pi, 500)):
        s = build_state(amplitudes(MixingSector(th, 1e-3), phi))
        assert abs(abs(s.rho23) ** 2 - s.rho22 * s.rho33) < 1e-14


def test_apply_dephasing_endpoints():
    s = build_state(amplitudes(MixingSector(0.5, 1e-3), 0.9))
    assert apply_dephasing(s, 0.0) == s
    full = apply_dephasing(s, 1.0)
    assert full.rho23 == 0 and full.rho22 == s.rho22 and full.rho33 == s.rho33
    for bad in (-0.1, 1.1, float("nan")):
        with pytest.raises(DomainError):
            apply_dephasing(s, bad)


def test_dephasing_matches_lindblad_factor():
    s = build_state(amplitudes(MixingSector(0.6, 1e-3), 0.4))
    spec = LindbladSpec(GAMMA_90_GEV)
    L = 735.0
    out = apply_dephasing(s, gamma_from_lindblad(spec, 1.0, L))
    factor = math.exp(-GAMMA_90_GEV * km_to_inverse_gev(L))
    assert abs(out.rho23 - factor * s.rho23) <= 1e-15 * abs(s.rho23)


def test_lindblad_dissipator_integration():
    # Integrate d rho/dL = (Gamma/2)(Z rho Z - rho) with an independent matrix exponential.
    s = build_state(amplitudes(MixingSector(0.6, 1e-3), 0.4))
    rho0 = block_matrix(s)
    rate, length = 0.37, 2.5
    Z = SIGMA3_FIRST
    eye = np.eye(4)
    # row-major vectorization: vec(A X B) = (A kron B^T) vec(X)
    gen = 0.5 * rate * (np.kron(Z, Z.T) - np.kron(eye, eye))
    rho_L = (expm(gen * length) @ rho0.reshape(-1)).reshape(4, 4)
    gamma = 1 - math.exp(-rate * length)
    expected = block_matrix(apply_dephasing(s, gamma))
    assert np.abs(rho_L - expected).max() < 1e-14


@settings(max_examples=200, deadline=None)
@given(unit, st.floats(0, math.pi / 2, exclude_max=True), st.floats(0, math.pi))
def test_kraus_equals_direct(gamma, theta, phi):
    s = build_state(amplitudes(MixingSector(theta, 1e-3), phi))
    ops = kraus_operators(gamma)
    completeness = sum(k.conj().T @ k for k in ops)
    assert np.abs(completeness - np.eye(4)).max() < 1e-15
    out = apply_kraus(block_matrix(s), ops)
    assert np.abs(out - block_matrix(apply_dephasing(s, gamma))).max() < 1e-14


@settings(max_examples=300, deadline=None)
@given(st.floats(0, 5e21), st.floats(0, 5e21), st.floats(0, 1e-21))
def test_semigroup(l1, l2, rate):
    # lengths here are already in natural units; feed them through a unit-rate spec
    spec = LindbladSpec(rate)
    g1 = gamma_from_lindblad(spec, 1.0, l1 / 5.07e18)
    g2 = gamma_from_lindblad(spec, 1.0, l2 / 5.07e18)
    g12 = gamma_from_lindblad(spec, 1.0, (l1 + l2) / 5.07e18)
    assert abs((1 - g1) * (1 - g2) - (1 - g12)) < 1e-12


@settings(max_examples=300, deadline=None)
@given(unit, st.floats(0, math.pi / 2, exclude_max=True), st.floats(0, math.pi))
def test_trace_and_positivity_preserved(gamma, theta, phi):
    s = build_state(amplitudes(MixingSector(theta, 1e-3), phi))
    out = apply_dephasing(s, gamma)
    assert abs(out.rho22 + out.rho33 - 1) < 1e-12
    assert abs(out.rho23) ** 2 <= out.rho22 * out.rho33 + 1e-12
    assert 0.0 <= out.gamma <= 1.0


def test_xstate_invariants():
    with pytest.raises(DomainError):
        XState(0.5, 0.6, 0.0)
    with pytest.raises(DomainError):
        XState(0.5, 0.5, 0.6)
    with pytest.raises(DomainError):
        XState(0.5, 0.5, 0.1, gamma=2.0)


def test_accumulated_gamma():
    s = build_state(amplitudes(MixingSector(0.6, 1e-3), 0.4))
    twice = apply_dephasing(apply_dephasing(s, 0.2), 0.3)
    assert twice.gamma == pytest.approx(1 - 0.8 * 0.7, abs=1e-15)
    assert twice.rho23 == pytest.approx(s.rho23 * 0.8 * 0.7, abs=1e-15)
