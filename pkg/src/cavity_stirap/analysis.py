"""Target states, closed-form references and protocol metrics.

Closed forms implemented here serve as independent oracles for the
integrators: the two-level Raman evolution, the instantaneous dark state of
the passage configuration, and the entangled targets reached by each scheme.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .hilbert import SpaceLayout, ket_to_density, partial_trace_cavity
from .model import PulseEnvelope, SystemParams

TWO_ATOM_DIM = 9
# two-atom composite index a = 3*i + j with levels ordered (0, 1, e)
_IDX_01 = 1
_IDX_10 = 3

TARGET_LABELS = ("bell_plus", "epr_minus_i")


@dataclass(frozen=True)
class TargetState:
    """A pure two-atom target with a fixed global phase."""

    label: str
    ket: np.ndarray


def target_state(label: str) -> TargetState:
    """Built-in targets on span{|01>, |10>}.

    ``bell_plus``   (|01> + |10>) / sqrt(2), reached by the dark-state passage.
    ``epr_minus_i`` (|01> - i |10>) / sqrt(2), reached by the Raman flip at
    Theta t = pi/4.
    """
    ket = np.zeros(TWO_ATOM_DIM, dtype=complex)
    if label == "bell_plus":
        ket[_IDX_01] = 1.0 / np.sqrt(2.0)
        ket[_IDX_10] = 1.0 / np.sqrt(2.0)
    elif label == "epr_minus_i":
        ket[_IDX_01] = 1.0 / np.sqrt(2.0)
        ket[_IDX_10] = -1j / np.sqrt(2.0)
    else:
        raise ValueError(f"unknown target label {label!r}, expected one of {TARGET_LABELS}")
    return TargetState(label=label, ket=ket)


def custom_target(ket: np.ndarray, label: str = "custom") -> TargetState:
    """Wrap an arbitrary normalized two-atom ket as a target."""
    ket = np.asarray(ket, dtype=complex)
    if ket.shape != (TWO_ATOM_DIM,):
        raise ValueError(f"two-atom ket must have shape ({TWO_ATOM_DIM},), got {ket.shape}")
    norm = np.linalg.norm(ket)
    if norm == 0:
        raise ValueError("target ket must be nonzero")
    return TargetState(label=label, ket=ket / norm)


def analytic_raman_state(theta_rate: float, t: float) -> np.ndarray:
    """Two-level Raman evolution from |01;0>: (cos(Theta t), -i sin(Theta t))."""
    if theta_rate < 0:
        raise ValueError("theta_rate must be nonnegative")
    x = theta_rate * t
    return np.array([np.cos(x), -1j * np.sin(x)])


def mixing_angle(pulses, t) -> float:
    """Dark-state mixing angle theta(t) = atan(|Omega_1| / |Omega_2|), in [0, pi/2]."""
    w1 = np.abs(pulses[0].value(t))
    w2 = np.abs(pulses[1].value(t))
    if np.all(w1 == 0) and np.all(w2 == 0):
        raise ValueError("mixing angle undefined where both drives vanish")
    return np.arctan2(w1, w2)


def dark_state(pulses, t: float) -> tuple[np.ndarray, float]:
    """Instantaneous dark state of the passage configuration.

    Returns (ket, theta) with ket = cos(theta) |01;0> + sin(theta) |10;0> in
    the subspace basis (|01;0>, |10;0>, |11;1>).  The ket is annihilated by
    the dark-state passage Hamiltonian at the same instant.
    """
    th = float(mixing_angle(pulses, t))
    return np.array([np.cos(th), np.sin(th), 0.0], dtype=complex), th


def fidelity(rho_atoms: np.ndarray, target: TargetState) -> float:
    """<psi| rho |psi> on the two-atom space after the cavity is traced out.

    Accepts a 9x9 density matrix (or a 9-dim ket for convenience).
    """
    state = np.asarray(rho_atoms)
    if state.ndim == 1:
        if state.shape != (TWO_ATOM_DIM,):
            raise ValueError(f"two-atom ket must have shape ({TWO_ATOM_DIM},)")
        return float(np.abs(np.vdot(target.ket, state)) ** 2)
    if state.shape != (TWO_ATOM_DIM, TWO_ATOM_DIM):
        raise ValueError(f"two-atom density matrix must be 9x9, got {state.shape}")
    asym = np.max(np.abs(state - state.conj().T))
    if asym > 1e-8:
        raise ValueError(f"density matrix asymmetry {asym:.3e} too large for a fidelity")
    val = np.vdot(target.ket, state @ target.ket)
    return float(val.real)


def success_rate(state: np.ndarray, layout: SpaceLayout, target: TargetState) -> float:
    """Tr[rho (|psi><psi| x I_cavity)] on the full space.

    Numerically identical to `fidelity` of the cavity-traced state; both are
    kept because they read as different measurements.
    """
    state = np.asarray(state)
    proj_atoms = np.outer(target.ket, target.ket.conj())
    proj = np.kron(proj_atoms, np.eye(layout.n_cavity))
    if state.ndim == 1:
        if state.shape != (layout.total_dim,):
            raise ValueError(f"ket dimension {state.shape} does not match layout")
        return float(np.vdot(state, proj @ state).real)
    if state.shape != (layout.total_dim, layout.total_dim):
        raise ValueError(f"state dimension {state.shape} does not match layout")
    return float(np.einsum("ij,ji->", state, proj).real)


def equal_rabi_time(pulses) -> float:
    """Time between the two pulse centers where |Omega_1(t)| = |Omega_2(t)|.

    Solved by bisection on the log magnitude ratio, which is monotone between
    the centers of two gaussians.  Raises ValueError when the pulses are not
    gaussians with distinct centers or when no crossing exists between them.
    """
    p1, p2 = pulses
    for p in (p1, p2):
        if p.shape != "gaussian":
            raise ValueError("equal-Rabi time is defined for gaussian pulses")
        if p.peak == 0:
            raise ValueError("equal-Rabi time undefined for a vanishing pulse")
    if p1.center == p2.center:
        raise ValueError("pulse centers coincide; the crossing time is ill-defined")

    def log_ratio(t):
        return (np.log(abs(p1.peak)) - ((t - p1.center) / p1.width) ** 2
                - np.log(abs(p2.peak)) + ((t - p2.center) / p2.width) ** 2)

    lo, hi = sorted((p1.center, p2.center))
    f_lo, f_hi = log_ratio(lo), log_ratio(hi)
    if f_lo == 0:
        return float(lo)
    if f_hi == 0:
        return float(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise ValueError("pulse magnitudes do not cross between the pulse centers")
    t_star = bisect(log_ratio, lo, hi, xtol=1e-13, rtol=8.9e-16)
    if abs(log_ratio(t_star)) > 1e-10:
        raise RuntimeError("equal-Rabi bisection failed to converge")
    return float(t_star)


def adiabaticity_ratio(pulses, params: SystemParams, times: np.ndarray) -> float:
    """max |d theta/dt| / Omega_rms over the grid, with
    Omega_rms = (g/|Delta|) sqrt(Omega_1^2 + Omega_2^2).

    Values well below 1 indicate the dark state is followed adiabatically.
    """
    times = np.asarray(times, dtype=float)
    w1 = np.abs(pulses[0].value(times))
    w2 = np.abs(pulses[1].value(times))
    theta = np.arctan2(w1, w2)
    dtheta = np.gradient(theta, times)
    omega_rms = (params.g / abs(params.delta)) * np.sqrt(w1 * w1 + w2 * w2)
    mask = omega_rms > 0
    if not np.any(mask):
        raise ValueError("both drives vanish on the entire grid")
    ratio = np.abs(dtheta[mask]) / omega_rms[mask]
    return float(np.max(ratio))


def atoms_density(state: np.ndarray, layout: SpaceLayout) -> np.ndarray:
    """Cavity-traced two-atom density matrix of a full-space ket or density."""
    return partial_trace_cavity(state, layout)


__all__ = [
    "TargetState",
    "target_state",
    "custom_target",
    "analytic_raman_state",
    "mixing_angle",
    "dark_state",
    "fidelity",
    "success_rate",
    "equal_rabi_time",
    "adiabaticity_ratio",
    "atoms_density",
]
