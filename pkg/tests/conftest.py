"""Shared fixtures: expensive protocol runs executed once per session."""

import numpy as np
import pytest

from nvdfs import (
    RegisterConfig,
    run_dfs_comparison,
    run_intuitive_baseline,
    run_logic_flip,
    run_preparation,
    run_single_c13,
    run_stirap_vs_bstirap,
)
from nvdfs.master_equation import DissipatorSpec


@pytest.fixture(scope="session")
def register():
    return RegisterConfig()


@pytest.fixture(scope="session")
def preparation_result():
    return run_preparation()


@pytest.fixture(scope="session")
def logic_flip_results():
    return {
        "zero_to_one": run_logic_flip(direction="zero_to_one"),
        "one_to_zero": run_logic_flip(direction="one_to_zero"),
    }


@pytest.fixture(scope="session")
def discrimination_results():
    dark, bright = run_stirap_vs_bstirap()
    return {"dark": dark, "bright": bright}


@pytest.fixture(scope="session")
def single_c13_result():
    return run_single_c13()


@pytest.fixture(scope="session")
def intuitive_result():
    return run_intuitive_baseline()


@pytest.fixture(scope="session")
def intuitive_no_dissipation():
    return run_intuitive_baseline(dissipation=DissipatorSpec(mode="none"))


@pytest.fixture(scope="session")
def dfs_results():
    return run_dfs_comparison()


def trajectory_states(result):
    """All stored density-matrix series attached to a protocol result."""
    out = []
    if result.trajectory.states is not None:
        out.append(result.trajectory)
    for key in ("ramp_stage_states", "pulse_stage_states"):
        traj = result.extras.get(key)
        if traj is not None and traj.states is not None:
            out.append(traj)
    return out


def all_protocol_results(
    preparation_result,
    logic_flip_results,
    discrimination_results,
    single_c13_result,
    intuitive_result,
    dfs_results,
):
    results = [preparation_result, single_c13_result, intuitive_result]
    results += list(logic_flip_results.values())
    results += list(discrimination_results.values())
    results += list(dfs_results.values())
    return results


def conservation_report(traj):
    """Worst trace / Hermiticity / positivity deviations along a trajectory."""
    worst_trace = 0.0
    worst_herm = 0.0
    worst_eig = 0.0
    for rho in traj.states:
        worst_trace = max(worst_trace, abs(np.trace(rho) - 1.0))
        worst_herm = max(worst_herm, np.abs(rho - rho.conj().T).max())
        w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
        worst_eig = min(worst_eig, w.min())
    return worst_trace, worst_herm, worst_eig
