"""Shared fixtures.

The headline runs (dissipative passage, its unitary twin, the two sweeps)
are expensive, so they run once per session and every test module reads
from the same trajectories.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

from cavity_stirap import equal_rabi_time, preset, run_scenario, run_sweep


@pytest.fixture(scope="session")
def fig2_run():
    """Dissipative passage run: (scenario, trajectory, wall seconds).

    The equal-Rabi crossing is added to the record grid so measurements at
    that time need no interpolation.
    """
    scenario = preset("fig2")
    t_star = equal_rabi_time(scenario.pulses)
    t0 = time.perf_counter()
    traj = run_scenario(scenario, extra_record_times=(t_star,))
    return scenario, traj, time.perf_counter() - t0


@pytest.fixture(scope="session")
def fig2_unitary_run():
    """The same passage with decay switched off."""
    base = preset("fig2")
    scenario = replace(base, params=replace(base.params, kappa=0.0, gamma_atom=0.0))
    return scenario, run_scenario(scenario)


@pytest.fixture(scope="session")
def fig3a_sweep():
    scenario = preset("fig3a")
    return scenario, run_sweep(scenario)


@pytest.fixture(scope="session")
def fig3b_sweep():
    scenario = preset("fig3b")
    return scenario, run_sweep(scenario)


@pytest.fixture
def rng():
    return np.random.default_rng(137)
