"""System parameters, drive pulses, Hamiltonian builders and dissipators.

The physical system is two three-level atoms in a single-mode cavity.  A
classical field drives |0> <-> |e> on each atom with Rabi frequency Omega_i(t)
and a shared detuning Delta; the cavity couples |1> <-> |e> with strength g at
the same detuning.  An engineered level shift (g^2 m - |Omega_i(t)|^2) / Delta
on |0>, with integer m, places the photon-exchange manifold on or off Raman
resonance.

Model hierarchy, selected through :class:`ModelSelector`:

``full``
    The three-level model on the complete atom-atom-cavity space.  In the
    default ``rotating_constant`` frame the excited manifold sits at energy
    -Delta, the sign for which far-detuned elimination of |e> produces the
    positive-shift dispersive model below; ``interaction_oscillatory`` moves
    that energy into explicit exp(-i Delta t) phases on the raising terms.
``effective_raman``
    Second-order model with |e> eliminated: dispersive shifts
    (g^2/Delta) a^dag a on |1> and (g^2 m/Delta) on |0>, plus the Raman
    exchange (Omega_i g / Delta)(a^dag s_10 + a s_01) per atom.
``lambda_subspace``
    The closed three-state subspace {|01;0>, |10;0>, |11;1>} of the
    dispersive model, with signed coupling convention set by the variant.
``two_level_raman``
    Far-detuned limit of the subspace at m = 0: an effective two-state flip
    |01;0> <-> |10;0> at rate Theta = |Omega_1 Omega_2| / (2 Delta).
``stirap``
    The subspace at m = 2 with the constant diagonal removed and opposite
    signs on the two couplings, the configuration whose dark state sweeps
    |01;0> into |10;0>.

All rates are quoted in units of g and times in units of 1/g unless a preset
carries an explicit physical scale.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .hilbert import SpaceLayout, atomic_op, build_space, cavity_annihilator, cavity_number

VARIANTS = ("full", "effective_raman", "lambda_subspace", "two_level_raman", "stirap")
FRAMES = ("rotating_constant", "interaction_oscillatory")
PULSE_SHAPES = ("gaussian", "constant")

#: basis labels of the closed Raman subspace, in matrix order
LAMBDA_BASIS = ("01;0", "10;0", "11;1")

#: the dispersive hierarchy |Delta| >> Omega, g is considered satisfied above
#: this ratio; below it the second-order reduction is unreliable
DISPERSIVE_RATIO = 10.0


class RegimeWarning(UserWarning):
    """A parameter regime assumption of a reduced model is not well satisfied."""


@dataclass(frozen=True)
class SystemParams:
    """Static system parameters, in units of the cavity coupling g.

    Parameters
    ----------
    delta : float
        Dispersive detuning Delta shared by drive and cavity couplings.
    kappa : float
        Cavity field decay rate; photon number decays at 2*kappa.
    gamma_atom : float
        Total decay rate of |e> per atom, split equally between the two
        ground states.
    m : int
        Integer multiple of g^2/Delta in the engineered shift on |0>.
    xi : float or None
        Drive amplitude ratio for the opposite-sign pulse convention
        Omega_1 = -xi * Omega_2; metadata only.
    n_max : int
        Cavity truncation used when the model lives on the full space.
    g_rad_per_s : float or None
        Physical value of g in rad/s for presets tied to an experiment;
        pure metadata, never enters the dynamics.
    """

    delta: float
    g: float = 1.0
    kappa: float = 0.0
    gamma_atom: float = 0.0
    m: int = 0
    xi: float | None = None
    n_max: int = 2
    g_rad_per_s: float | None = None

    def __post_init__(self):
        if self.delta == 0:
            raise ValueError("delta must be nonzero")
        if self.g <= 0:
            raise ValueError("g must be positive")
        if self.kappa < 0 or self.gamma_atom < 0:
            raise ValueError("decay rates must be nonnegative")
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"m must be a nonnegative integer, got {self.m!r}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError(f"n_max must be an integer >= 1, got {self.n_max!r}")

    def check_dispersive(self, pulses) -> bool:
        """Warn unless |delta| exceeds both g and every pulse peak by a wide margin.

        Returns True when the dispersive hierarchy holds.
        """
        scale = max([self.g] + [abs(p.peak) for p in pulses])
        ok = abs(self.delta) >= DISPERSIVE_RATIO * scale
        if not ok:
            warnings.warn(
                f"detuning |delta|={abs(self.delta)}g is below {DISPERSIVE_RATIO}x the "
                f"largest coupling scale {scale}g; dispersive reductions are unreliable",
                RegimeWarning,
                stacklevel=3,
            )
        return ok


@dataclass(frozen=True)
class PulseEnvelope:
    """Drive envelope Omega(t).

    ``gaussian`` evaluates peak * exp(-((t - center)/width)^2); ``constant``
    evaluates the peak everywhere.  The peak is a signed real amplitude; the
    relative sign between the two drives selects which dark state the
    passage follows.
    """

    peak: float
    center: float = 0.0
    width: float = 1.0
    shape: str = "gaussian"

    def __post_init__(self):
        if self.shape not in PULSE_SHAPES:
            raise ValueError(f"unknown pulse shape {self.shape!r}, expected one of {PULSE_SHAPES}")
        if self.shape == "gaussian" and self.width <= 0:
            raise ValueError("gaussian pulse width must be positive")

    def value(self, t):
        """Envelope value at time t (scalar or array)."""
        if self.shape == "constant":
            return self.peak * np.ones_like(np.asarray(t, dtype=float))
        x = (np.asarray(t, dtype=float) - self.center) / self.width
        return self.peak * np.exp(-x * x)


@dataclass(frozen=True)
class ModelSelector:
    """Choice of model variant and, for the full model, the rotating frame."""

    variant: str = "full"
    frame: str = "rotating_constant"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if self.frame not in FRAMES:
            raise ValueError(f"unknown frame {self.frame!r}, expected one of {FRAMES}")

    @property
    def raman_sign(self) -> int:
        """Sign convention on the second drive coupling in subspace models.

        +1 for the plain Raman configuration, -1 for the dark-state passage
        configuration (drives with opposite signs).  Fixed by the variant,
        never by hidden global state.
        """
        return -1 if self.variant == "stirap" else +1

    @property
    def on_full_space(self) -> bool:
        return self.variant in ("full", "effective_raman")


# ---------------------------------------------------------------------------
# Hamiltonian models.  Each model precomputes its constituent operators once
# and assembles H(t) with scalar coefficients, so the integrator's right-hand
# side stays cheap.


class FullHamiltonian:
    """Three-level model on the complete atom-atom-cavity space."""

    def __init__(self, params: SystemParams, pulses, layout: SpaceLayout | None = None,
                 frame: str = "rotating_constant"):
        if frame not in FRAMES:
            raise ValueError(f"unknown frame {frame!r}")
        self.params = params
        self.pulses = tuple(pulses)
        self.layout = layout or build_space(params.n_max)
        self.frame = frame
        self.embedding = None
        self.dim = self.layout.total_dim

        lo = self.layout
        a = cavity_annihilator(lo)
        # raising parts: drive |0> -> |e| per atom, cavity |1> -> |e> with a photon removed
        self._raise_drive = tuple(atomic_op(lo, i, "e", "0") for i in (1, 2))
        self._raise_cavity = a @ (atomic_op(lo, 1, "e", "1") + atomic_op(lo, 2, "e", "1"))
        self._p_excited = atomic_op(lo, 1, "e", "e") + atomic_op(lo, 2, "e", "e")
        self._p00 = tuple(atomic_op(lo, i, "0", "0") for i in (1, 2))

        g, delta = params.g, params.delta
        self._drive_sym = tuple(c + c.conj().T for c in self._raise_drive)
        cav = g * self._raise_cavity
        self._static_constant = -delta * self._p_excited + cav + cav.conj().T

    def _shifts(self, w1: float, w2: float) -> tuple[float, float]:
        p = self.params
        g2 = p.g * p.g
        return ((g2 * p.m - w1 * w1) / p.delta, (g2 * p.m - w2 * w2) / p.delta)

    def at(self, t: float) -> np.ndarray:
        w1 = float(self.pulses[0].value(t))
        w2 = float(self.pulses[1].value(t))
        s1, s2 = self._shifts(w1, w2)
        if self.frame == "rotating_constant":
            h = self._static_constant.copy()
            h += w1 * self._drive_sym[0]
            h += w2 * self._drive_sym[1]
        else:
            phase = np.exp(-1j * self.params.delta * t)
            z = phase * (w1 * self._raise_drive[0] + w2 * self._raise_drive[1]
                         + self.params.g * self._raise_cavity)
            h = z + z.conj().T
        h += s1 * self._p00[0] + s2 * self._p00[1]
        return h


class EffectiveRamanHamiltonian:
    """Dispersive model on the full space with |e> eliminated."""

    def __init__(self, params: SystemParams, pulses, layout: SpaceLayout | None = None):
        self.params = params
        self.pulses = tuple(pulses)
        self.layout = layout or build_space(params.n_max)
        self.embedding = None
        self.dim = self.layout.total_dim
        params.check_dispersive(self.pulses)

        lo = self.layout
        g, delta = params.g, params.delta
        num = cavity_number(lo)
        adag = cavity_annihilator(lo).conj().T
        self._exchange = tuple(adag @ atomic_op(lo, i, "1", "0") for i in (1, 2))
        static = np.zeros((self.dim, self.dim), dtype=complex)
        for i in (1, 2):
            static += (g * g / delta) * (num @ atomic_op(lo, i, "1", "1"))
            static += (g * g * params.m / delta) * atomic_op(lo, i, "0", "0")
        self._static = static
        self._coupling_scale = g / delta

    def at(self, t: float) -> np.ndarray:
        h = self._static.copy()
        for i, k in enumerate(self._exchange):
            w = float(self.pulses[i].value(t))
            z = (w * self._coupling_scale) * k
            h += z + z.conj().T
        return h


class LambdaSubspaceHamiltonian:
    """3x3 model on {|01;0>, |10;0>, |11;1>}.

    The couplings use drive magnitudes with an explicit sign on the second
    one, so the matrix matches either drive-sign configuration without
    consulting the envelope signs.
    """

    def __init__(self, params: SystemParams, pulses, sign: int = +1,
                 include_diagonal: bool = True):
        if sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")
        self.params = params
        self.pulses = tuple(pulses)
        self.sign = sign
        self.include_diagonal = include_diagonal
        self.dim = 3
        layout = build_space(params.n_max)
        self.layout = layout
        self.embedding = np.array([layout.index(*_split(lbl)) for lbl in LAMBDA_BASIS])
        params.check_dispersive(self.pulses)

    def at(self, t: float) -> np.ndarray:
        p = self.params
        g2 = p.g * p.g
        a = p.g * abs(float(self.pulses[0].value(t))) / p.delta
        b = self.sign * p.g * abs(float(self.pulses[1].value(t))) / p.delta
        h = np.zeros((3, 3), dtype=complex)
        if self.include_diagonal:
            h[0, 0] = h[1, 1] = p.m * g2 / p.delta
            h[2, 2] = 2.0 * g2 / p.delta
        h[0, 2] = h[2, 0] = a
        h[1, 2] = h[2, 1] = b
        return h


class StirapHamiltonian(LambdaSubspaceHamiltonian):
    """Dark-state passage form: m = 2 subspace, constant diagonal dropped,
    opposite signs on the two couplings."""

    def __init__(self, params: SystemParams, pulses):
        if params.m != 2:
            raise ValueError(f"the dark-state passage model requires m=2, got m={params.m}")
        super().__init__(params, pulses, sign=-1, include_diagonal=False)


class TwoLevelRamanHamiltonian:
    """Constant two-state flip between |01;0> and |10;0> at rate Theta."""

    def __init__(self, params: SystemParams, pulses):
        if params.m != 0:
            raise ValueError(f"the two-level Raman model requires m=0, got m={params.m}")
        pulses = tuple(pulses)
        for p in pulses:
            if p.shape != "constant":
                raise ValueError("the two-level Raman model requires constant pulses")
        self.params = params
        self.pulses = pulses
        self.dim = 2
        layout = build_space(params.n_max)
        self.layout = layout
        self.embedding = np.array([layout.index(0, 1, 0), layout.index(1, 0, 0)])
        self.theta_rate = raman_rate(params, pulses)
        # validity needs the bridge splitting 2 g^2/Delta to dominate both couplings
        bridge = 2.0 * params.g * params.g / abs(params.delta)
        coupling = params.g * max(abs(p.peak) for p in pulses) / abs(params.delta)
        if bridge < DISPERSIVE_RATIO * coupling:
            warnings.warn(
                f"bridge splitting {bridge:.3g}g is below {DISPERSIVE_RATIO}x the Raman "
                f"coupling {coupling:.3g}g; the two-level reduction is marginal",
                RegimeWarning,
                stacklevel=2,
            )
        self._h = np.array([[0.0, self.theta_rate], [self.theta_rate, 0.0]], dtype=complex)

    def at(self, t: float) -> np.ndarray:
        return self._h


def _split(label: str):
    from .hilbert import parse_basis_label

    return parse_basis_label(label)


def raman_rate(params: SystemParams, pulses) -> float:
    """Effective flip rate Theta = |Omega_1 Omega_2| / (2 Delta) for constant drives."""
    w1, w2 = (abs(p.peak) for p in pulses)
    return w1 * w2 / (2.0 * abs(params.delta))


def build_model(params: SystemParams, pulses, selector: ModelSelector):
    """Instantiate the Hamiltonian model named by `selector`."""
    if selector.variant == "full":
        return FullHamiltonian(params, pulses, frame=selector.frame)
    if selector.variant == "effective_raman":
        return EffectiveRamanHamiltonian(params, pulses)
    if selector.variant == "lambda_subspace":
        return LambdaSubspaceHamiltonian(params, pulses, sign=selector.raman_sign)
    if selector.variant == "stirap":
        return StirapHamiltonian(params, pulses)
    if selector.variant == "two_level_raman":
        return TwoLevelRamanHamiltonian(params, pulses)
    raise ValueError(f"unknown variant {selector.variant!r}")


# one-shot builders, convenient in tests and scripts


def hamiltonian_full(params: SystemParams, pulses, t: float,
                     frame: str = "rotating_constant") -> np.ndarray:
    return FullHamiltonian(params, pulses, frame=frame).at(t)


def hamiltonian_effective_raman(params: SystemParams, pulses, t: float) -> np.ndarray:
    return EffectiveRamanHamiltonian(params, pulses).at(t)


def hamiltonian_lambda_subspace(params: SystemParams, pulses, t: float,
                                sign: int = +1) -> np.ndarray:
    return LambdaSubspaceHamiltonian(params, pulses, sign=sign).at(t)


def hamiltonian_stirap(params: SystemParams, pulses, t: float) -> np.ndarray:
    return StirapHamiltonian(params, pulses).at(t)


def hamiltonian_two_level_raman(params: SystemParams, pulses) -> np.ndarray:
    return TwoLevelRamanHamiltonian(params, pulses).at(0.0)


@dataclass(frozen=True)
class Dissipators:
    """Collapse operators with rates folded in, ready for the master equation."""

    collapse_ops: tuple = field(default=())

    @property
    def has_any(self) -> bool:
        return len(self.collapse_ops) > 0


def build_dissipators(params: SystemParams, layout: SpaceLayout) -> Dissipators:
    """Cavity decay sqrt(2 kappa) a and atomic decay sqrt(gamma_atom/2) s_je.

    gamma_atom is the total decay rate of |e>; each branch |e> -> |0> and
    |e> -> |1> carries half of it.  Channels with zero rate are omitted.
    """
    ops = []
    if params.kappa > 0:
        ops.append(math.sqrt(2.0 * params.kappa) * cavity_annihilator(layout))
    if params.gamma_atom > 0:
        branch = math.sqrt(params.gamma_atom / 2.0)
        for atom in (1, 2):
            for target in ("0", "1"):
                ops.append(branch * atomic_op(layout, atom, target, "e"))
    return Dissipators(collapse_ops=tuple(ops))
