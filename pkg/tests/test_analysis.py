"""Targets, closed forms, crossing time and adiabaticity diagnostics."""

import math

import numpy as np
import pytest

from cavity_stirap.analysis import (
    adiabaticity_ratio,
    analytic_raman_state,
    custom_target,
    dark_state,
    equal_rabi_time,
    fidelity,
    mixing_angle,
    success_rate,
    target_state,
)
from cavity_stirap.hilbert import build_space, ket_to_density
from cavity_stirap.model import PulseEnvelope, StirapHamiltonian, SystemParams

FIG2_PULSES = (PulseEnvelope(peak=2.0, center=300.0, width=125.0),
               PulseEnvelope(peak=-1.0, center=150.0, width=175.0))


def test_target_states():
    bell = target_state("bell_plus")
    epr = target_state("epr_minus_i")
    assert np.linalg.norm(bell.ket) == pytest.approx(1.0)
    assert np.linalg.norm(epr.ket) == pytest.approx(1.0)
    assert bell.ket[1] == pytest.approx(1 / math.sqrt(2))   # |01>
    assert bell.ket[3] == pytest.approx(1 / math.sqrt(2))   # |10>
    assert epr.ket[3] == pytest.approx(-1j / math.sqrt(2))
    with pytest.raises(ValueError):
        target_state("ghz")


def test_custom_target():
    ket = np.zeros(9, dtype=complex)
    ket[0] = 1.0
    tgt = custom_target(ket, "both_down")
    assert tgt.label == "both_down"
    scaled = custom_target(ket * 2.0, "scaled")
    np.testing.assert_allclose(scaled.ket, ket)  # normalized on entry
    with pytest.raises(ValueError):
        custom_target(np.zeros(9, dtype=complex), "null")
    with pytest.raises(ValueError):
        custom_target(np.ones(4, dtype=complex) / 2.0, "wrong_dim")


def test_analytic_raman_state_closed_form():
    np.testing.assert_allclose(analytic_raman_state(0.05, 0.0), [1.0, 0.0])
    quarter = analytic_raman_state(0.05, math.pi / (4 * 0.05))
    np.testing.assert_allclose(quarter, [1 / math.sqrt(2), -1j / math.sqrt(2)], atol=1e-15)
    half = analytic_raman_state(0.05, math.pi / (2 * 0.05))
    np.testing.assert_allclose(half, [0.0, -1j], atol=1e-15)
    assert np.linalg.norm(analytic_raman_state(0.12, 37.0)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        analytic_raman_state(-0.05, 1.0)


def test_mixing_angle_limits():
    def pulses(p1, p2):
        return (PulseEnvelope(peak=p1, shape="constant"),
                PulseEnvelope(peak=p2, shape="constant"))

    assert mixing_angle(pulses(0.0, 1.0), 0.0) == pytest.approx(0.0)
    assert mixing_angle(pulses(1.0, 0.0), 0.0) == pytest.approx(math.pi / 2)
    assert mixing_angle(pulses(1.0, 1.0), 0.0) == pytest.approx(math.pi / 4)
    assert mixing_angle(pulses(-1.0, 1.0), 0.0) == pytest.approx(math.pi / 4)
    with pytest.raises(ValueError):
        mixing_angle(pulses(0.0, 0.0), 0.0)


def test_dark_state_structure():
    ket, theta = dark_state(FIG2_PULSES, equal_rabi_time(FIG2_PULSES))
    np.testing.assert_allclose(ket, [1 / math.sqrt(2), 1 / math.sqrt(2), 0.0], atol=1e-9)
    assert theta == pytest.approx(math.pi / 4)
    early, theta_early = dark_state(FIG2_PULSES, 0.0)
    assert theta_early < 0.05                # pump still off: passage starts at |01;0>
    assert early[0] == pytest.approx(1.0, abs=1e-3)


def test_dark_state_is_null_vector(rng):
    params = SystemParams(delta=20.0, m=2, xi=2.0, n_max=2)
    model = StirapHamiltonian(params, FIG2_PULSES)
    for t in rng.uniform(50.0, 550.0, size=5):
        ket, _ = dark_state(FIG2_PULSES, t)
        assert np.linalg.norm(model.at(t) @ ket) < 1e-14


def test_fidelity_basics(rng):
    bell = target_state("bell_plus")
    assert fidelity(ket_to_density(bell.ket), bell) == pytest.approx(1.0)
    down = np.zeros(9, dtype=complex)
    down[0] = 1.0
    assert fidelity(ket_to_density(down), bell) == pytest.approx(0.0)
    assert fidelity(down, bell) == pytest.approx(0.0)    # ket input allowed
    # linear in the state
    x = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    rho1 = x @ x.conj().T
    rho1 /= np.trace(rho1).real
    y = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    rho2 = y @ y.conj().T
    rho2 /= np.trace(rho2).real
    mixed = 0.3 * rho1 + 0.7 * rho2
    assert fidelity(mixed, bell) == pytest.approx(
        0.3 * fidelity(rho1, bell) + 0.7 * fidelity(rho2, bell))
    bad = rho1.copy()
    bad[0, 1] += 0.2
    with pytest.raises(ValueError):
        fidelity(bad, bell)


def test_success_rate_reference_values(rng):
    layout = build_space(2)
    bell = target_state("bell_plus")
    vacuum_product = np.kron(bell.ket, np.array([1.0, 0.0, 0.0], dtype=complex))
    assert success_rate(vacuum_product, layout, bell) == pytest.approx(1.0)
    mixed = np.eye(27, dtype=complex) / 27.0
    assert success_rate(mixed, layout, bell) == pytest.approx(1.0 / 9.0)


def test_success_rate_equals_fidelity_of_reduction(rng):
    from cavity_stirap.hilbert import partial_trace_cavity

    layout = build_space(2)
    bell = target_state("bell_plus")
    x = rng.normal(size=(27, 27)) + 1j * rng.normal(size=(27, 27))
    rho = x @ x.conj().T
    rho /= np.trace(rho).real
    p = success_rate(rho, layout, bell)
    f = fidelity(partial_trace_cavity(rho, layout), bell)
    assert p == pytest.approx(f, abs=1e-12)


def test_equal_rabi_time_symmetric_midpoint():
    pulses = (PulseEnvelope(peak=1.0, center=120.0, width=50.0),
              PulseEnvelope(peak=-1.0, center=80.0, width=50.0))
    assert equal_rabi_time(pulses) == pytest.approx(100.0, abs=1e-9)


def test_equal_rabi_time_residual():
    t_star = equal_rabi_time(FIG2_PULSES)
    w1 = abs(FIG2_PULSES[0].value(t_star))
    w2 = abs(FIG2_PULSES[1].value(t_star))
    assert abs(w1 / w2 - 1.0) < 1e-10
    assert 150.0 < t_star < 300.0


def test_equal_rabi_time_rejects_degenerate_inputs():
    base = PulseEnvelope(peak=1.0, center=100.0, width=50.0)
    with pytest.raises(ValueError):
        equal_rabi_time((base, base))                          # coincident centers
    with pytest.raises(ValueError):
        equal_rabi_time((base, PulseEnvelope(peak=0.0, center=200.0, width=50.0)))
    with pytest.raises(ValueError):
        equal_rabi_time((base, PulseEnvelope(peak=1.0, shape="constant")))
    # a huge second peak keeps |Omega_2| above |Omega_1| on the whole interval
    no_cross = (PulseEnvelope(peak=1.0, center=0.0, width=10.0),
                PulseEnvelope(peak=1e6, center=10.0, width=10.0))
    with pytest.raises(ValueError):
        equal_rabi_time(no_cross)


def test_adiabaticity_vanishes_for_static_drive():
    params = SystemParams(delta=20.0, m=0, n_max=1)
    pulses = (PulseEnvelope(peak=2.0, shape="constant"),
              PulseEnvelope(peak=1.0, shape="constant"))
    grid = np.linspace(0.0, 100.0, 501)
    assert adiabaticity_ratio(pulses, params, grid) == pytest.approx(0.0, abs=1e-12)


def test_adiabaticity_small_for_slow_pulses_and_scales():
    params = SystemParams(delta=20.0, m=2, xi=2.0, n_max=2)
    grid = np.linspace(100.0, 300.0, 2001)
    slow = adiabaticity_ratio(FIG2_PULSES, params, grid)
    assert 0.0 < slow < 0.2
    fast_pulses = tuple(
        PulseEnvelope(peak=p.peak, center=p.center / 100.0, width=p.width / 100.0)
        for p in FIG2_PULSES)
    fast = adiabaticity_ratio(fast_pulses, params, grid / 100.0)
    assert fast / slow == pytest.approx(100.0, rel=1e-3)
