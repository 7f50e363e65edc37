"""Time evolution of kets (Schrodinger) and density matrices (Lindblad).

Two integrators are available: an adaptive Dormand-Prince pair through
scipy's solve_ivp (``rk45_adaptive``, the default) and a fixed-step RK4
(``rk4_fixed``) kept mainly as an independent cross-check of the adaptive
results.  Neither renormalizes the state; norm and trace drift are recorded
as diagnostics and large drift aborts the run instead of being hidden.

Master equation convention: rho' = -i[H, rho] + sum_c (c rho c^dag
- {c^dag c, rho}/2) with the rates already folded into the collapse
operators c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .analysis import fidelity, success_rate, target_state
from .hilbert import (
    SpaceLayout,
    assert_valid_ket,
    parse_basis_label,
    partial_trace_cavity,
)
from .model import Dissipators

METHODS = ("rk45_adaptive", "rk4_fixed")

#: hard abort thresholds; runs exceeding them raise IntegrationError
NORM_ABORT = 1e-6
TRACE_ABORT = 1e-6
EIG_ABORT = -1e-6
#: recorded density matrices must be Hermitian to this level before the
#: symmetrization that is applied at every recorded step
HERM_RESIDUAL_TOL = 1e-10


class IntegrationError(RuntimeError):
    """The integrator produced a state violating a conservation bound."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Integration window, method and accuracy settings.

    ``record_stride`` is the output sampling interval; the end point is always
    recorded.  ``dt`` applies to ``rk4_fixed`` only and defaults to 1e-3.
    """

    t_end: float
    t_start: float = 0.0
    method: str = "rk45_adaptive"
    record_stride: float = 1.0
    dt: float | None = None
    tol_abs: float = 1e-9
    tol_rel: float = 1e-9

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}, expected one of {METHODS}")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.record_stride <= 0:
            raise ValueError("record_stride must be positive")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        for name, tol in (("tol_abs", self.tol_abs), ("tol_rel", self.tol_rel)):
            if not 0 < tol <= 1e-2:
                raise ValueError(f"{name} must lie in (0, 1e-2], got {tol}")

    def record_times(self, extra=()) -> np.ndarray:
        span = self.t_end - self.t_start
        n = int(math.floor(span / self.record_stride + 1e-9))
        times = self.t_start + self.record_stride * np.arange(n + 1)
        if times[-1] < self.t_end - 1e-9 * max(1.0, abs(self.t_end)):
            times = np.append(times, self.t_end)
        else:
            times[-1] = self.t_end
        if len(extra):
            extra = np.asarray(extra, dtype=float)
            if np.any(extra < self.t_start) or np.any(extra > self.t_end):
                raise ValueError("extra record times must lie inside the integration window")
            times = np.union1d(times, extra)
        return times


@dataclass
class Trajectory:
    """Recorded run: times, observable series, conservation diagnostics.

    `states` is populated only on request; `final_state` always holds the
    state at t_end.
    """

    times: np.ndarray
    observables: dict
    diagnostics: dict
    final_state: np.ndarray
    states: list | None = None


def _hamiltonian_callable(h):
    return h.at if hasattr(h, "at") else h


def _rk4_times(cfg: IntegratorConfig, record: np.ndarray):
    dt = cfg.dt if cfg.dt is not None else 1e-3
    return dt


def _integrate_rk4(fun, y0: np.ndarray, record: np.ndarray, dt: float) -> list[np.ndarray]:
    """Classic RK4 between consecutive record times, dt shortened per interval
    so every record time is hit exactly."""
    states = [y0.copy()]
    y = y0.copy()
    for t0, t1 in zip(record[:-1], record[1:]):
        span = t1 - t0
        n_sub = max(1, int(math.ceil(span / dt - 1e-12)))
        h = span / n_sub
        t = t0
        for _ in range(n_sub):
            k1 = fun(t, y)
            k2 = fun(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = fun(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = fun(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
        states.append(y.copy())
    return states


def _integrate(fun, y0: np.ndarray, cfg: IntegratorConfig, record: np.ndarray) -> list[np.ndarray]:
    if cfg.method == "rk4_fixed":
        return _integrate_rk4(fun, y0, record, _rk4_times(cfg, record))
    sol = solve_ivp(
        fun,
        (record[0], record[-1]),
        y0,
        method="RK45",
        t_eval=record,
        rtol=cfg.tol_rel,
        atol=cfg.tol_abs,
    )
    if not sol.success:
        raise IntegrationError(f"adaptive integration failed: {sol.message}")
    return [sol.y[:, k].copy() for k in range(sol.y.shape[1])]


def evolve_schrodinger(hamiltonian, psi0: np.ndarray, cfg: IntegratorConfig,
                       observables=None, extra_record_times=(),
                       store_states: bool = False) -> Trajectory:
    """Integrate i psi' = H(t) psi from a normalized ket.

    `hamiltonian` is either a callable t -> matrix or a model object with an
    ``at`` method.  Norm drift beyond 1e-6 raises IntegrationError; no
    renormalization is ever applied.
    """
    h = _hamiltonian_callable(hamiltonian)
    psi0 = np.asarray(psi0, dtype=complex)
    assert_valid_ket(psi0)
    record = cfg.record_times(extra_record_times)

    def rhs(t, y):
        return -1j * (h(t) @ y)

    states = _integrate(rhs, psi0, cfg, record)

    norms = np.array([np.linalg.norm(s) for s in states])
    drift = float(np.max(np.abs(norms - 1.0)))
    # NaN-safe: an unstable run that overflowed must abort too
    if not drift <= NORM_ABORT:
        hint = f"dt={cfg.dt}" if cfg.method == "rk4_fixed" else \
            f"tol_rel={cfg.tol_rel}, tol_abs={cfg.tol_abs}"
        raise IntegrationError(
            f"norm drift {drift:.3e} exceeds {NORM_ABORT:g}; "
            f"reduce the step size ({hint})")

    series = _evaluate_observables(observables, states, kind="ket")
    diagnostics = {"kind": "ket", "norm_drift": drift,
                   "method": cfg.method, "steps_recorded": len(record)}
    _check_population_bounds(series, diagnostics)
    return Trajectory(times=record, observables=series, diagnostics=diagnostics,
                      final_state=states[-1], states=states if store_states else None)


def evolve_lindblad(hamiltonian, rho0: np.ndarray, dissipators: Dissipators,
                    cfg: IntegratorConfig, observables=None, extra_record_times=(),
                    store_states: bool = False) -> Trajectory:
    """Integrate the master equation from a valid density matrix.

    Every recorded state is symmetrized rho <- (rho + rho^dag)/2 after its
    pre-symmetrization asymmetry is checked against 1e-10.  Trace drift or
    negativity beyond 1e-6 aborts the run.
    """
    h = _hamiltonian_callable(hamiltonian)
    rho0 = np.asarray(rho0, dtype=complex)
    d = rho0.shape[0]
    if rho0.shape != (d, d):
        raise ValueError(f"rho0 must be square, got shape {rho0.shape}")
    record = cfg.record_times(extra_record_times)

    cs = np.array(dissipators.collapse_ops) if dissipators.has_any else None
    if cs is not None:
        cs_dag = cs.conj().transpose(0, 2, 1)
        half_cdc = 0.5 * np.einsum("kij,kjl->il", cs_dag, cs)
    else:
        half_cdc = np.zeros((d, d), dtype=complex)

    def rhs(t, y):
        rho = y.reshape(d, d)
        a = -1j * h(t) - half_cdc
        out = a @ rho + rho @ a.conj().T
        if cs is not None:
            out += np.einsum("kij,kjl->il", np.matmul(cs, rho), cs_dag, optimize=True)
        return out.ravel()

    raw = _integrate(rhs, rho0.ravel(), cfg, record)

    herm_residual = 0.0
    trace_drift = 0.0
    min_eig = np.inf
    states = []
    for y in raw:
        rho = y.reshape(d, d)
        if not np.all(np.isfinite(rho.view(float))):
            raise IntegrationError(
                "state became non-finite (unstable step size); reduce dt or tolerances")
        herm_residual = max(herm_residual, float(np.max(np.abs(rho - rho.conj().T))))
        rho = 0.5 * (rho + rho.conj().T)
        trace_drift = max(trace_drift, abs(float(np.trace(rho).real) - 1.0))
        min_eig = min(min_eig, float(np.linalg.eigvalsh(rho)[0]))
        states.append(rho)
    if not trace_drift <= TRACE_ABORT:
        raise IntegrationError(f"trace drift {trace_drift:.3e} exceeds {TRACE_ABORT:g}")
    if not min_eig >= EIG_ABORT:
        raise IntegrationError(f"negativity {min_eig:.3e} below {EIG_ABORT:g}")
    if not herm_residual <= HERM_RESIDUAL_TOL:
        raise IntegrationError(
            f"pre-symmetrization asymmetry {herm_residual:.3e} exceeds {HERM_RESIDUAL_TOL:g}")

    series = _evaluate_observables(observables, states, kind="density")
    diagnostics = {"kind": "density", "trace_drift": trace_drift,
                   "herm_residual": herm_residual, "min_eigenvalue": min_eig,
                   "method": cfg.method, "steps_recorded": len(record)}
    _check_population_bounds(series, diagnostics)
    return Trajectory(times=record, observables=series, diagnostics=diagnostics,
                      final_state=states[-1], states=states if store_states else None)


def _check_population_bounds(series: dict, diagnostics: dict) -> None:
    worst = 0.0
    for name, values in series.items():
        if name.startswith(("population:", "success_rate:", "fidelity:")):
            v = np.asarray(values)
            worst = max(worst, float(np.max(-v, initial=0.0)),
                        float(np.max(v - 1.0, initial=0.0)))
    diagnostics["population_excess"] = worst
    if worst > 1e-8:
        raise IntegrationError(f"population outside [0, 1] by {worst:.3e}")


def _evaluate_observables(observables, states, kind: str) -> dict:
    if observables is None:
        return {}
    if isinstance(observables, ObservableSet):
        funcs = observables.functions()
    else:
        funcs = dict(observables)
    series = {}
    for name, fn in funcs.items():
        series[name] = np.array([fn(s) for s in states], dtype=float)
    return series


class ObservableSet:
    """Named measurements evaluated on full-space kets or density matrices.

    Supported names:

    ``population:ij;n``      probability of basis state |ij;n>
    ``photon_number``        <a^dag a>
    ``excited_total``        summed |e> population of both atoms
    ``success_rate:LABEL``   Tr[rho (|psi><psi| x I_cavity)] for a built-in target
    ``fidelity:LABEL``       <psi| Tr_cavity(rho) |psi> for a built-in target
    """

    def __init__(self, layout: SpaceLayout, names):
        self.layout = layout
        self.names = tuple(names)
        self._funcs = {name: self._compile(name) for name in self.names}

    def functions(self) -> dict:
        return dict(self._funcs)

    def evaluate(self, state) -> dict:
        return {name: fn(state) for name, fn in self._funcs.items()}

    def _compile(self, name: str):
        lo = self.layout
        if name.startswith("population:"):
            idx = lo.index(*parse_basis_label(name.split(":", 1)[1]))
            return _diag_weight_fn(_unit_weight(lo.total_dim, idx))
        if name == "photon_number":
            w = np.array([lo.labels(k)[2] for k in range(lo.total_dim)], dtype=float)
            return _diag_weight_fn(w)
        if name == "excited_total":
            w = np.array([(lo.labels(k)[0] == "e") + (lo.labels(k)[1] == "e")
                          for k in range(lo.total_dim)], dtype=float)
            return _diag_weight_fn(w)
        if name.startswith("success_rate:"):
            tgt = target_state(name.split(":", 1)[1])
            return lambda s: success_rate(s, lo, tgt)
        if name.startswith("fidelity:"):
            tgt = target_state(name.split(":", 1)[1])
            return lambda s: fidelity(partial_trace_cavity(s, lo), tgt)
        raise ValueError(f"unknown observable {name!r}")


def _unit_weight(dim: int, idx: int) -> np.ndarray:
    w = np.zeros(dim)
    w[idx] = 1.0
    return w


def _diag_weight_fn(weights: np.ndarray):
    def fn(state):
        state = np.asarray(state)
        if state.ndim == 1:
            return float(weights @ (state.real ** 2 + state.imag ** 2))
        return float(weights @ np.diag(state).real)

    return fn


def record_observable(state: np.ndarray, name: str, layout: SpaceLayout) -> float:
    """One-off evaluation of a named observable; see :class:`ObservableSet`."""
    return ObservableSet(layout, (name,)).evaluate(state)[name]
