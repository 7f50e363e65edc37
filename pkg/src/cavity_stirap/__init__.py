"""Cavity-mediated Raman passage between two three-level atoms.

Simulates a single-mode cavity coupling two Lambda atoms, from the full
driven Hamiltonian down to its dispersive and adiabatic-passage reductions,
with optional cavity and atomic decay, plus preset scenarios, robustness
sweeps and a self-validation suite.
"""

from .analysis import (
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
from .dynamics import (
    IntegrationError,
    IntegratorConfig,
    ObservableSet,
    Trajectory,
    evolve_lindblad,
    evolve_schrodinger,
    record_observable,
)
from .hilbert import (
    SpaceLayout,
    build_space,
    ket_to_density,
    parse_basis_label,
    partial_trace_cavity,
)
from .model import (
    Dissipators,
    ModelSelector,
    PulseEnvelope,
    RegimeWarning,
    SystemParams,
    build_dissipators,
    build_model,
    hamiltonian_effective_raman,
    hamiltonian_full,
    hamiltonian_lambda_subspace,
    hamiltonian_stirap,
    hamiltonian_two_level_raman,
    raman_rate,
)
from .scenarios import (
    DEFAULT_SEED,
    PRESET_NAMES,
    Scenario,
    SweepResult,
    SweepSpec,
    preset,
    run_scenario,
    run_sweep,
    scenario_from_dict,
    scenario_to_dict,
)
from .validate import CheckResult, run_validation, summarize

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SEED",
    "PRESET_NAMES",
    "CheckResult",
    "Dissipators",
    "IntegrationError",
    "IntegratorConfig",
    "ModelSelector",
    "ObservableSet",
    "PulseEnvelope",
    "RegimeWarning",
    "Scenario",
    "SpaceLayout",
    "SweepResult",
    "SweepSpec",
    "SystemParams",
    "Trajectory",
    "adiabaticity_ratio",
    "analytic_raman_state",
    "build_dissipators",
    "build_model",
    "build_space",
    "custom_target",
    "dark_state",
    "equal_rabi_time",
    "evolve_lindblad",
    "evolve_schrodinger",
    "fidelity",
    "hamiltonian_effective_raman",
    "hamiltonian_full",
    "hamiltonian_lambda_subspace",
    "hamiltonian_stirap",
    "hamiltonian_two_level_raman",
    "ket_to_density",
    "mixing_angle",
    "parse_basis_label",
    "partial_trace_cavity",
    "preset",
    "raman_rate",
    "record_observable",
    "run_scenario",
    "run_sweep",
    "run_validation",
    "scenario_from_dict",
    "scenario_to_dict",
    "success_rate",
    "summarize",
    "target_state",
    "__version__",
]
