"""Built-in validation suite.

Each check exercises a relationship the implementation must satisfy
independently of any particular simulation run: operator identities,
closed-form decay laws, agreement between model variants, frame and
integrator consistency, and convergence order.  The suite returns one
CheckResult per check so callers can report pass/fail line by line.

The ``stirap_sign`` hook exists to demonstrate that the dark-state check
has teeth: running with the wrong relative drive sign (+1) must fail it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

from .analysis import analytic_raman_state, dark_state
from .dynamics import IntegratorConfig, ObservableSet, evolve_lindblad, evolve_schrodinger
from .hilbert import LEVELS, build_space, ket_to_density, partial_trace_cavity
from .model import (
    Dissipators,
    EffectiveRamanHamiltonian,
    FullHamiltonian,
    LambdaSubspaceHamiltonian,
    PulseEnvelope,
    RegimeWarning,
    StirapHamiltonian,
    SystemParams,
    TwoLevelRamanHamiltonian,
    build_dissipators,
    hamiltonian_effective_raman,
    hamiltonian_lambda_subspace,
    raman_rate,
)

DEFAULT_SEED = 137


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


class _ZeroHamiltonian:
    """Free decay: no coherent part at all."""

    def __init__(self, dim):
        self._h = np.zeros((dim, dim), dtype=complex)

    def at(self, t):
        return self._h


def _fig2_like(delta=20.0, kappa=0.0, gamma=0.0):
    params = SystemParams(delta=delta, kappa=kappa, gamma_atom=gamma, m=2, xi=2.0, n_max=2)
    pulses = (PulseEnvelope(peak=2.0, center=300.0, width=125.0),
              PulseEnvelope(peak=-1.0, center=150.0, width=175.0))
    return params, pulses


def _check_hermiticity(rng) -> CheckResult:
    params, pulses = _fig2_like()
    builders = [
        ("full", FullHamiltonian(params, pulses)),
        ("full-osc", FullHamiltonian(params, pulses, frame="interaction_oscillatory")),
        ("lambda", LambdaSubspaceHamiltonian(params, pulses)),
        ("stirap", StirapHamiltonian(params, pulses)),
    ]
    worst = 0.0
    for t in rng.uniform(0.0, 600.0, size=25):
        for _, model in builders:
            h = model.at(t)
            worst = max(worst, float(np.max(np.abs(h - h.conj().T))))
    passed = worst < 1e-12
    return CheckResult("hermiticity", passed,
                       f"max |H - H^dag| = {worst:.2e} over 25 random times, 4 builders")


def _check_index_bijection() -> CheckResult:
    layout = build_space(3)
    seen = set()
    ok = True
    for i in LEVELS:
        for j in LEVELS:
            for n in range(layout.n_cavity):
                idx = layout.index(i, j, n)
                seen.add(idx)
                ok = ok and layout.labels(idx) == (i, j, n)
    ok = ok and seen == set(range(layout.total_dim))
    return CheckResult("index-bijection", ok,
                       f"{len(seen)} states cover 0..{layout.total_dim - 1} and round-trip")


def _check_partial_trace(rng) -> CheckResult:
    layout = build_space(2)
    psi = rng.normal(size=layout.total_dim) + 1j * rng.normal(size=layout.total_dim)
    psi /= np.linalg.norm(psi)
    rho = ket_to_density(psi)
    red = partial_trace_cavity(rho, layout)
    trace_err = abs(np.trace(red) - 1.0)
    herm_err = float(np.max(np.abs(red - red.conj().T)))
    # a product of a pure atomic state with a cavity state must reduce purely
    atoms = rng.normal(size=9) + 1j * rng.normal(size=9)
    atoms /= np.linalg.norm(atoms)
    cav = rng.normal(size=layout.n_cavity) + 1j * rng.normal(size=layout.n_cavity)
    cav /= np.linalg.norm(cav)
    prod = np.kron(atoms, cav)
    red_prod = partial_trace_cavity(prod, layout)
    purity_err = abs(np.trace(red_prod @ red_prod).real - 1.0)
    worst = max(trace_err, herm_err, purity_err)
    return CheckResult("partial-trace", worst < 1e-12,
                       f"trace err {trace_err:.2e}, herm err {herm_err:.2e}, "
                       f"product purity err {purity_err:.2e}")


def _check_dark_state(rng, stirap_sign: float) -> CheckResult:
    params, pulses = _fig2_like()
    model = LambdaSubspaceHamiltonian(params, pulses, sign=stirap_sign,
                                      include_diagonal=False)
    worst = 0.0
    for t in rng.uniform(50.0, 550.0, size=100):
        ket, _ = dark_state(pulses, t)
        worst = max(worst, float(np.linalg.norm(model.at(t) @ ket)))
    return CheckResult("dark-state-nullity", worst < 1e-12,
                       f"max |H_sub dark>| = {worst:.2e} over 100 times "
                       f"(relative drive sign {stirap_sign:+.0f})")


def _check_analytic_raman(rng) -> CheckResult:
    params = SystemParams(delta=20.0, m=0, n_max=1)
    pulses = (PulseEnvelope(peak=2.0, shape="constant"),
              PulseEnvelope(peak=1.0, shape="constant"))
    model = TwoLevelRamanHamiltonian(params, pulses)
    h = model.at(0.0)
    theta = raman_rate(params, pulses)
    worst = 0.0
    psi0 = np.array([1.0, 0.0], dtype=complex)
    for t in rng.uniform(0.0, 4.0 * math.pi / theta, size=50):
        numeric = expm(-1j * h * t) @ psi0
        exact = analytic_raman_state(theta, t)
        worst = max(worst, float(np.linalg.norm(numeric - exact)))
    return CheckResult("two-level-closed-form", worst < 1e-10,
                       f"max |psi - analytic| = {worst:.2e} over 50 times")


def _check_subspace_embedding(rng) -> CheckResult:
    # the subspace model uses drive magnitudes plus an explicit sign, so
    # same-sign drives pair with s=+1 and opposite-sign drives with s=-1
    params, signed = _fig2_like()
    plain = (replace(signed[0]), replace(signed[1], peak=abs(signed[1].peak)))
    worst = 0.0
    emb = None
    for pulses, sign in ((plain, +1.0), (signed, -1.0)):
        sub = LambdaSubspaceHamiltonian(params, pulses, sign=sign)
        emb = np.asarray(sub.embedding)
        for t in rng.uniform(0.0, 600.0, size=20):
            h_eff = hamiltonian_effective_raman(params, pulses, t)
            block = h_eff[np.ix_(emb, emb)]
            worst = max(worst, float(np.max(np.abs(block - sub.at(t)))))
    layout = build_space(params.n_max)
    return CheckResult("subspace-embedding", worst < 1e-12,
                       f"max |block diff| = {worst:.2e} for both sign pairings; "
                       f"subspace indices {tuple(int(i) for i in emb)} of {layout.total_dim}")


def _check_stirap_offset(rng) -> CheckResult:
    params, pulses = _fig2_like()
    shift = 2.0 * params.g**2 / params.delta
    sub = LambdaSubspaceHamiltonian(params, pulses, sign=-1.0)
    st = StirapHamiltonian(params, pulses)
    worst = 0.0
    for t in rng.uniform(0.0, 600.0, size=20):
        diff = sub.at(t) - shift * np.eye(3) - st.at(t)
        worst = max(worst, float(np.max(np.abs(diff))))
    return CheckResult("stirap-uniform-shift", worst < 1e-12,
                       f"m=2 subspace minus {shift:.3g}*I matches to {worst:.2e}")


def _check_raman_rate_reduction() -> CheckResult:
    params = SystemParams(delta=20.0, m=0, n_max=1)
    pulses = (PulseEnvelope(peak=2.0, shape="constant"),
              PulseEnvelope(peak=1.0, shape="constant"))
    h3 = hamiltonian_lambda_subspace(params, pulses, 0.0)
    # eliminate the bridge level: rate = a*b / (E_bridge - E_ground)
    a, b = h3[0, 2], h3[1, 2]
    gap = h3[2, 2] - h3[0, 0]
    reduced = abs(a * b) / gap
    theta = raman_rate(params, pulses)
    err = abs(reduced - theta)
    return CheckResult("second-order-rate", err < 1e-12,
                       f"bridge elimination gives {reduced:.6g}, "
                       f"direct rate {theta:.6g}, diff {err:.2e}")


def _check_frame_equivalence() -> CheckResult:
    params = SystemParams(delta=20.0, m=2, xi=2.0, n_max=2)
    pulses = (PulseEnvelope(peak=2.0, center=1.0, width=0.5),
              PulseEnvelope(peak=-1.0, center=1.0, width=0.5))
    layout = build_space(params.n_max)
    psi0 = layout.basis_ket("01;0")
    cfg = IntegratorConfig(t_end=2.0, record_stride=0.25, tol_rel=1e-11, tol_abs=1e-13)
    obs = ObservableSet(layout, ("population:01;0", "population:10;0", "excited_total"))
    runs = {}
    for frame in ("rotating_constant", "interaction_oscillatory"):
        model = FullHamiltonian(params, pulses, frame=frame)
        runs[frame] = evolve_schrodinger(model, psi0, cfg, obs.functions())
    worst = 0.0
    for name in obs.names:
        a = runs["rotating_constant"].observables[name]
        b = runs["interaction_oscillatory"].observables[name]
        worst = max(worst, float(np.max(np.abs(a - b))))
    return CheckResult("frame-equivalence", worst < 1e-6,
                       f"max population deviation between frames {worst:.2e}")


def _check_decay_laws() -> CheckResult:
    layout = build_space(2)
    params = SystemParams(delta=20.0, kappa=0.05, gamma_atom=0.08, m=2, xi=1.0, n_max=2)
    diss = build_dissipators(params, layout)
    h0 = _ZeroHamiltonian(layout.total_dim)
    cfg = IntegratorConfig(t_end=10.0, record_stride=1.0, tol_rel=1e-10, tol_abs=1e-12)
    obs = ObservableSet(layout, ("photon_number", "excited_total",
                                 "population:01;0", "population:11;0"))
    rho0 = ket_to_density(layout.basis_ket("e1;1"))
    traj = evolve_lindblad(h0, rho0, diss, cfg, obs.functions())
    t = traj.times
    n_err = float(np.max(np.abs(traj.observables["photon_number"] - np.exp(-2 * params.kappa * t))))
    e_err = float(np.max(np.abs(traj.observables["excited_total"] - np.exp(-params.gamma_atom * t))))
    # the excited atom decays into |0> and |1> with equal weight
    decayed = 1.0 - np.exp(-params.gamma_atom * t[-1])
    cav_left = np.exp(-2 * params.kappa * t[-1])
    atoms = partial_trace_cavity(traj.final_state, layout)
    p_0 = float(atoms[1, 1].real)   # |01>
    p_1 = float(atoms[4, 4].real)   # |11>
    branch_err = max(abs(p_0 - decayed / 2), abs(p_1 - decayed / 2))
    worst = max(n_err, e_err, branch_err)
    detail = (f"photon law err {n_err:.2e}, excited law err {e_err:.2e}, "
              f"branching err {branch_err:.2e} (cav survival {cav_left:.3f})")
    return CheckResult("free-decay-laws", worst < 1e-7, detail)


def _check_effective_vs_full() -> CheckResult:
    devs = {}
    for delta in (20.0, 40.0):
        params, pulses = _fig2_like(delta=delta)
        layout = build_space(params.n_max)
        psi0 = layout.basis_ket("01;0")
        cfg = IntegratorConfig(t_end=600.0, record_stride=10.0, tol_rel=1e-9, tol_abs=1e-11)
        names = ("population:01;0", "population:10;0", "population:11;1")
        obs = ObservableSet(layout, names)
        full = evolve_schrodinger(FullHamiltonian(params, pulses), psi0, cfg, obs.functions())
        eff = evolve_schrodinger(EffectiveRamanHamiltonian(params, pulses), psi0, cfg,
                                 obs.functions())
        devs[delta] = max(float(np.max(np.abs(full.observables[n] - eff.observables[n])))
                          for n in names)
    passed = devs[20.0] < 0.05 and devs[40.0] < devs[20.0]
    return CheckResult("effective-vs-full", passed,
                       f"ground-manifold deviation {devs[20.0]:.3e} at delta=20, "
                       f"{devs[40.0]:.3e} at delta=40")


def _check_unitary_limit() -> CheckResult:
    params, pulses = _fig2_like()
    layout = build_space(params.n_max)
    model = FullHamiltonian(params, pulses)
    psi0 = layout.basis_ket("01;0")
    cfg = IntegratorConfig(t_end=120.0, record_stride=10.0, tol_rel=1e-10, tol_abs=1e-12)
    names = ("population:01;0", "population:10;0", "photon_number")
    obs = ObservableSet(layout, names)
    ket_run = evolve_schrodinger(model, psi0, cfg, obs.functions())
    rho_run = evolve_lindblad(model, ket_to_density(psi0), Dissipators(), cfg, obs.functions())
    worst = max(float(np.max(np.abs(ket_run.observables[n] - rho_run.observables[n])))
                for n in names)
    return CheckResult("unitary-limit", worst < 1e-7,
                       f"ket vs decay-free master equation deviation {worst:.2e}")


def _check_rk4_order() -> CheckResult:
    params = SystemParams(delta=20.0, m=0, n_max=1)
    pulses = (PulseEnvelope(peak=2.0, shape="constant"),
              PulseEnvelope(peak=1.0, shape="constant"))
    model = TwoLevelRamanHamiltonian(params, pulses)
    theta = raman_rate(params, pulses)
    t_end = 2.0 / theta
    psi0 = np.array([1.0, 0.0], dtype=complex)
    errs = []
    for dt in (t_end / 40, t_end / 80):
        cfg = IntegratorConfig(t_end=t_end, record_stride=t_end, method="rk4_fixed", dt=dt)
        traj = evolve_schrodinger(model, psi0, cfg)
        errs.append(float(np.linalg.norm(traj.final_state - analytic_raman_state(theta, t_end))))
    ratio = errs[0] / errs[1]
    passed = 10.0 < ratio < 24.0
    return CheckResult("rk4-order", passed,
                       f"halving dt shrinks error by {ratio:.1f}x "
                       f"(errors {errs[0]:.2e} -> {errs[1]:.2e}; fourth order gives 16x)")


def _check_dispersive_warning() -> CheckResult:
    pulses = (PulseEnvelope(peak=2.0, shape="constant"),
              PulseEnvelope(peak=1.0, shape="constant"))
    fired_small = _warns(SystemParams(delta=2.0, m=0, n_max=1), pulses)
    fired_large = _warns(SystemParams(delta=40.0, m=0, n_max=1), pulses)
    passed = fired_small and not fired_large
    return CheckResult("dispersive-warning", passed,
                       f"warning fired at delta=2: {fired_small}, at delta=40: {fired_large}")


def _warns(params, pulses) -> bool:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        params.check_dispersive(pulses)
    return any(issubclass(w.category, RegimeWarning) for w in caught)


def run_validation(delta: float = 20.0, stirap_sign: float = -1.0,
                   seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Run every check and return the results in a stable order."""
    rng = np.random.default_rng(seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        results = [
            _check_hermiticity(rng),
            _check_index_bijection(),
            _check_partial_trace(rng),
            _check_dark_state(rng, stirap_sign),
            _check_analytic_raman(rng),
            _check_subspace_embedding(rng),
            _check_stirap_offset(rng),
            _check_raman_rate_reduction(),
            _check_frame_equivalence(),
            _check_decay_laws(),
            _check_effective_vs_full(),
            _check_unitary_limit(),
            _check_rk4_order(),
        ]
    results.append(_check_dispersive_warning())
    return results


def summarize(results) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] {r.name}: {r.detail}")
    n_fail = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
