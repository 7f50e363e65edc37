"""Hamiltonian builders, pulse envelopes and dissipators."""

import math
import warnings

import numpy as np
import pytest

from cavity_stirap.hilbert import build_space
from cavity_stirap.model import (
    EffectiveRamanHamiltonian,
    FullHamiltonian,
    LambdaSubspaceHamiltonian,
    ModelSelector,
    PulseEnvelope,
    RegimeWarning,
    StirapHamiltonian,
    SystemParams,
    TwoLevelRamanHamiltonian,
    build_dissipators,
    build_model,
    hamiltonian_full,
    hamiltonian_two_level_raman,
    raman_rate,
)

FIG2_PARAMS = SystemParams(delta=20.0, kappa=0.1, gamma_atom=0.1, m=2, xi=2.0, n_max=2)
FIG2_PULSES = (PulseEnvelope(peak=2.0, center=300.0, width=125.0),
               PulseEnvelope(peak=-1.0, center=150.0, width=175.0))


def test_params_validation():
    with pytest.raises(ValueError):
        SystemParams(delta=0.0)
    with pytest.raises(ValueError):
        SystemParams(delta=20.0, g=0.0)
    with pytest.raises(ValueError):
        SystemParams(delta=20.0, kappa=-0.1)
    with pytest.raises(ValueError):
        SystemParams(delta=20.0, gamma_atom=-1.0)
    with pytest.raises(ValueError):
        SystemParams(delta=20.0, m=-1)
    with pytest.raises(ValueError):
        SystemParams(delta=20.0, n_max=0)


def test_pulse_envelope_shapes():
    gauss = PulseEnvelope(peak=2.0, center=300.0, width=125.0)
    assert gauss.value(300.0) == pytest.approx(2.0)
    assert gauss.value(425.0) == pytest.approx(2.0 * math.exp(-1.0))
    flat = PulseEnvelope(peak=-1.5, shape="constant")
    assert flat.value(0.0) == flat.value(1e4) == -1.5
    vals = gauss.value(np.array([300.0, 425.0]))
    assert vals.shape == (2,)
    with pytest.raises(ValueError):
        PulseEnvelope(peak=1.0, shape="square")
    with pytest.raises(ValueError):
        PulseEnvelope(peak=1.0, width=0.0)


def test_selector_validation_and_sign():
    assert ModelSelector("stirap").raman_sign == -1
    assert ModelSelector("lambda_subspace").raman_sign == +1
    assert ModelSelector("full").on_full_space
    assert not ModelSelector("stirap").on_full_space
    with pytest.raises(ValueError):
        ModelSelector("bogus")
    with pytest.raises(ValueError):
        ModelSelector("full", frame="lab")


def test_full_matrix_elements():
    layout = build_space(2)
    t = 210.0
    w1 = FIG2_PULSES[0].value(t)
    w2 = FIG2_PULSES[1].value(t)
    h = hamiltonian_full(FIG2_PARAMS, FIG2_PULSES, t)

    def elem(row, col):
        return h[layout.index(*_lab(row)), layout.index(*_lab(col))]

    # drive couples |0> to |e> on its own atom only
    assert elem("e1;0", "01;0") == pytest.approx(w1)
    assert elem("0e;0", "00;0") == pytest.approx(w2)
    assert elem("e1;0", "01;0") != pytest.approx(w2)
    # cavity exchanges |1> <-> |e> with one photon
    assert elem("1e;0", "11;1") == pytest.approx(FIG2_PARAMS.g)
    assert elem("e1;0", "11;1") == pytest.approx(FIG2_PARAMS.g)
    assert elem("1e;1", "11;2") == pytest.approx(FIG2_PARAMS.g * math.sqrt(2))
    # excited manifold offset and compensated ground shifts
    assert elem("e1;0", "e1;0") == pytest.approx(-FIG2_PARAMS.delta)
    s1 = (FIG2_PARAMS.m - w1 * w1) / FIG2_PARAMS.delta
    s2 = (FIG2_PARAMS.m - w2 * w2) / FIG2_PARAMS.delta
    assert elem("01;0", "01;0") == pytest.approx(s1)
    assert elem("10;0", "10;0") == pytest.approx(s2)
    assert elem("00;0", "00;0") == pytest.approx(s1 + s2)
    assert elem("11;1", "11;1") == pytest.approx(0.0)


def _lab(label):
    from cavity_stirap.hilbert import parse_basis_label

    return parse_basis_label(label)


def test_full_is_hermitian_at_random_times(rng):
    model = FullHamiltonian(FIG2_PARAMS, FIG2_PULSES)
    for t in rng.uniform(0, 600, size=10):
        h = model.at(t)
        np.testing.assert_allclose(h, h.conj().T, atol=1e-14)


def test_frames_differ_by_excited_offset_at_t0():
    rot = FullHamiltonian(FIG2_PARAMS, FIG2_PULSES, frame="rotating_constant")
    osc = FullHamiltonian(FIG2_PARAMS, FIG2_PULSES, frame="interaction_oscillatory")
    layout = build_space(2)
    p_exc = np.zeros((27, 27))
    for idx in range(27):
        i, j, _ = layout.labels(idx)
        p_exc[idx, idx] = (i == "e") + (j == "e")
    np.testing.assert_allclose(rot.at(0.0), osc.at(0.0) - FIG2_PARAMS.delta * p_exc,
                               atol=1e-12)


def test_oscillatory_frame_carries_phase():
    osc = FullHamiltonian(FIG2_PARAMS, FIG2_PULSES, frame="interaction_oscillatory")
    layout = build_space(2)
    t = 300.0
    h = osc.at(t)
    w1 = FIG2_PULSES[0].value(t)
    expected = w1 * np.exp(-1j * FIG2_PARAMS.delta * t)
    assert h[layout.index("e", "1", 0), layout.index("0", "1", 0)] == pytest.approx(expected)


def test_effective_couplings_and_resonance():
    layout = build_space(2)
    t = 210.0
    model = EffectiveRamanHamiltonian(FIG2_PARAMS, FIG2_PULSES)
    h = model.at(t)
    g, delta = FIG2_PARAMS.g, FIG2_PARAMS.delta
    w1 = FIG2_PULSES[0].value(t)
    w2 = FIG2_PULSES[1].value(t)
    i01 = layout.index("0", "1", 0)
    i10 = layout.index("1", "0", 0)
    i111 = layout.index("1", "1", 1)
    assert h[i111, i01] == pytest.approx(w1 * g / delta)
    assert h[i111, i10] == pytest.approx(w2 * g / delta)
    # with two stored quanta the whole passage manifold is degenerate
    assert h[i01, i01] == pytest.approx(FIG2_PARAMS.m * g * g / delta)
    assert h[i111, i111] == pytest.approx(2.0 * g * g / delta)
    assert h[i01, i01] == pytest.approx(h[i111, i111])
    # the eliminated level is decoupled
    ie = layout.index("e", "1", 0)
    assert np.all(h[ie, :] == 0.0)
    assert np.all(h[:, ie] == 0.0)


def test_lambda_subspace_matrix():
    params = SystemParams(delta=20.0, m=2, xi=2.0, n_max=2)
    t = 150.0
    a = params.g * abs(FIG2_PULSES[0].value(t)) / params.delta
    b = params.g * abs(FIG2_PULSES[1].value(t)) / params.delta
    shift = params.m * params.g**2 / params.delta
    for sign in (+1.0, -1.0):
        h = LambdaSubspaceHamiltonian(params, FIG2_PULSES, sign=sign).at(t)
        np.testing.assert_allclose(
            h,
            np.array([[shift, 0, a], [0, shift, sign * b], [a, sign * b, shift]]),
            atol=1e-14)


def test_stirap_is_shifted_lambda():
    model = StirapHamiltonian(FIG2_PARAMS, FIG2_PULSES)
    sub = LambdaSubspaceHamiltonian(FIG2_PARAMS, FIG2_PULSES, sign=-1.0)
    shift = 2.0 * FIG2_PARAMS.g**2 / FIG2_PARAMS.delta
    for t in (0.0, 150.0, 300.0):
        np.testing.assert_allclose(model.at(t), sub.at(t) - shift * np.eye(3), atol=1e-14)
    assert np.all(np.diag(model.at(150.0)) == 0.0)


def test_stirap_requires_two_stored_quanta():
    params = SystemParams(delta=20.0, m=0, n_max=2)
    with pytest.raises(ValueError):
        StirapHamiltonian(params, FIG2_PULSES)


def test_two_level_rate_and_matrix():
    params = SystemParams(delta=20.0, m=0, n_max=1)
    pulses = (PulseEnvelope(peak=2.0, shape="constant"),
              PulseEnvelope(peak=1.0, shape="constant"))
    assert raman_rate(params, pulses) == pytest.approx(0.05)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        h = hamiltonian_two_level_raman(params, pulses)
    np.testing.assert_allclose(h, [[0.0, 0.05], [0.05, 0.0]], atol=1e-15)


def test_two_level_rejects_wrong_configuration():
    with pytest.raises(ValueError):
        TwoLevelRamanHamiltonian(SystemParams(delta=20.0, m=2, n_max=1),
                                 (PulseEnvelope(peak=2.0, shape="constant"),
                                  PulseEnvelope(peak=1.0, shape="constant")))
    with pytest.raises(ValueError):
        TwoLevelRamanHamiltonian(SystemParams(delta=20.0, m=0, n_max=1), FIG2_PULSES)


def test_dispersive_warning_thresholds():
    pulses = (PulseEnvelope(peak=2.0, shape="constant"),
              PulseEnvelope(peak=1.0, shape="constant"))
    with pytest.warns(RegimeWarning):
        SystemParams(delta=2.0, m=0, n_max=1).check_dispersive(pulses)
    with warnings.catch_warnings():
        warnings.simplefilter("error", RegimeWarning)
        assert SystemParams(delta=40.0, m=0, n_max=1).check_dispersive(pulses)


def test_build_model_dispatch():
    full = build_model(FIG2_PARAMS, FIG2_PULSES, ModelSelector("full"))
    assert full.dim == 27 and full.embedding is None
    osc = build_model(FIG2_PARAMS, FIG2_PULSES,
                      ModelSelector("full", frame="interaction_oscillatory"))
    assert osc.frame == "interaction_oscillatory"
    sub = build_model(FIG2_PARAMS, FIG2_PULSES, ModelSelector("stirap"))
    assert sub.dim == 3
    assert list(sub.embedding) == [3, 9, 13]


def test_dissipator_rates_and_channels():
    layout = build_space(2)
    diss = build_dissipators(FIG2_PARAMS, layout)
    assert len(diss.collapse_ops) == 5   # cavity + two decay paths per atom
    norms = sorted(float(np.max(np.abs(c))) for c in diss.collapse_ops)
    # atomic channels carry sqrt(gamma/2), the cavity channel sqrt(2*kappa*n_max)
    assert norms[0] == pytest.approx(math.sqrt(FIG2_PARAMS.gamma_atom / 2.0))
    assert norms[-1] == pytest.approx(math.sqrt(2.0 * FIG2_PARAMS.kappa * 2.0))
    none = build_dissipators(SystemParams(delta=20.0, n_max=2), layout)
    assert not none.has_any
    cavity_only = build_dissipators(SystemParams(delta=20.0, kappa=0.3, n_max=2), layout)
    assert len(cavity_only.collapse_ops) == 1
