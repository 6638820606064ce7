"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest -s`` to see all lines).

Criterion 6 (single-carbon transfer) encodes reference targets that the
faithful model cannot reach at the published parameters; it is expected
to fail and documents the measured values.  All other criteria pass.
"""

import time
from types import SimpleNamespace

import numpy as np

from conftest import all_protocol_results, trajectory_states
from nvdfs import run_preparation
from nvdfs.cli import EXIT_OK, dispatch
from nvdfs.eigensystem import (
    SINGLET,
    ms0_eigensystem,
    numerical_eig,
    singlet_degeneracy_bz,
)
from nvdfs.hamiltonians import RegisterConfig, h_ms0, khz
from nvdfs.master_equation import (
    DissipatorSpec,
    build_dissipators,
    integrate,
    lindblad_rhs,
    liouvillian,
)
from nvdfs.operators import pair_operator, spin_half_operators

CFG = RegisterConfig()
GC = CFG.constants.gamma_c
D12 = CFG.d12


def report(n: int, ok: bool, detail: str) -> bool:
    print(f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


def test_criterion_1_eigensystem_exactness():
    """Analytic manifold eigensystem vs the dense solver on a 50x50 grid."""
    t0 = time.perf_counter()
    worst_e = 0.0
    worst_ov_deficit = 0.0
    singlet_ok = True
    for bx in np.linspace(0.0, 150.0, 50):
        for bz in np.linspace(0.0, 100.0, 50):
            eig = ms0_eigensystem((bx, bz), D12, GC)
            if eig.energies[1] != 0.0 or np.abs(eig.states[:, 1] - SINGLET).max() != 0.0:
                singlet_ok = False
            h = h_ms0((bx, bz), CFG)
            w, v = numerical_eig(h)
            scale = max(np.abs(w).max(), 1e-30)
            for k in range(4):
                # overlap with the numerically degenerate cluster around
                # the analytic energy (plain vector overlap is undefined
                # inside an exactly degenerate pair)
                cluster = np.abs(w - eig.energies[k]) <= 1e-9 * scale + 1e-15
                ov = np.linalg.norm(v[:, cluster].conj().T @ eig.states[:, k])
                worst_ov_deficit = max(worst_ov_deficit, 1.0 - ov)
                closest = np.abs(w - eig.energies[k]).min()
                worst_e = max(worst_e, closest / scale)
    elapsed = time.perf_counter() - t0
    ok = (
        worst_e <= 1e-9
        and worst_ov_deficit <= 1e-8
        and singlet_ok
        and elapsed < 5.0
    )
    assert report(
        1,
        ok,
        f"energies rel {worst_e:.2e} (<=1e-9), overlap deficit "
        f"{worst_ov_deficit:.2e} (<=1e-8), singlet exact: {singlet_ok}, "
        f"runtime {elapsed:.2f}s (<5s)",
    )


def test_criterion_2_degeneracy_condition():
    bz = singlet_degeneracy_bz(100.0, khz(4.0), GC)
    eig = ms0_eigensystem((100.0, bz), khz(4.0), GC)
    ok = 70.0 <= bz <= 71.0 and abs(eig.energies[2]) <= 1e-10 * abs(eig.energies[0])
    assert report(
        2,
        ok,
        f"Bz(100 G) = {bz:.4f} G (in [70, 71]), |E3/E1| = "
        f"{abs(eig.energies[2]) / abs(eig.energies[0]):.2e} (<=1e-10)",
    )


def test_criterion_3_integrator_oracle():
    """Adaptive integration vs the vectorized-superoperator exponential."""
    from scipy.linalg import expm

    half = spin_half_operators()
    pair_iz = (pair_operator(half.iz, None), pair_operator(None, half.iz))
    h1 = h_ms0((100.0, 5.0), CFG)
    h2 = h_ms0((30.0, 70.0), CFG)
    diss = build_dissipators(
        DissipatorSpec("independent", 7.0, (50.0, 70.0)), None, pair_iz
    )
    rng = np.random.default_rng(17)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    rho0 = np.outer(psi, psi.conj())

    t0 = time.perf_counter()
    traj = integrate(
        rho0,
        lambda t: h1 if t < 50.0 else h2,
        diss,
        (0.0, 100.0),
        report_points=201,
        breakpoints=[50.0],
    )
    dt = traj.times[1] - traj.times[0]
    m1, m2 = expm(liouvillian(h1, diss) * dt), expm(liouvillian(h2, diss) * dt)
    vec = rho0.flatten()
    worst = 0.0
    for i in range(1, traj.times.size):
        vec = (m1 if traj.times[i] <= 50.0 + 1e-9 else m2) @ vec
        worst = max(worst, np.abs(traj.states[i] - vec.reshape(4, 4)).max())
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 10.0
    assert report(
        3, ok, f"max-norm error {worst:.2e} (<=1e-6) over 100 us, runtime {elapsed:.2f}s (<10s)"
    )


def test_criterion_4_preparation_reproduction():
    t0 = time.perf_counter()
    res = run_preparation()
    elapsed = time.perf_counter() - t0
    f = res.final_fidelity
    ramp = res.timing["ramp_time"]
    total = res.timing["total_time"]
    ok = (
        abs(f - 0.874) <= 0.03
        and abs(ramp - 20.0) <= 0.5
        and abs(total - 50.0) <= 1.0
        and elapsed < 60.0
    )
    assert report(
        4,
        ok,
        f"fidelity {f:.4f} (0.874 +- 0.03), ramp {ramp:.2f} us (20.0 +- 0.5), "
        f"total {total:.2f} us (~50), runtime {elapsed:.1f}s (<60s)",
    )


def test_criterion_5_logic_flip_reproduction(logic_flip_results, discrimination_results):
    f0 = logic_flip_results["zero_to_one"].final_fidelity
    f1 = logic_flip_results["one_to_zero"].final_fidelity
    dark = discrimination_results["dark"].extras["peak_ms1_population"]
    bright = discrimination_results["bright"].extras["peak_ms1_population"]
    ok = abs(f0 - 0.906) <= 0.03 and abs(f1 - 0.906) <= 0.03 and dark < bright
    assert report(
        5,
        ok,
        f"fidelities {f0:.4f} / {f1:.4f} (0.906 +- 0.03 both directions), "
        f"manifold exposure dark {dark:.4f} < reversed {bright:.4f}",
    )


def test_criterion_6_single_c13_reproduction(single_c13_result):
    """Reference targets: 96 +- 2% fidelity inside a 30 us window with the
    parasitic level below 0.02 throughout.

    The faithful model cannot meet the fidelity/leakage targets at the
    published parameters: the parasitic level sits only ~6.8 rad/us from
    the resonant intermediate while the drive couples to it at ~1.6 rad/us,
    so it transiently hosts ~(coupling/detuning)^2 ~ 5-8% population, and
    electron dephasing of that admixture caps the transfer near 83%.  The
    mixing-angle clause passes; the other two fail and are reported.
    """
    res = single_c13_result
    f = res.final_fidelity
    peak4 = res.extras["peak_level4_population"]
    theta = res.extras["mixing_theta_rad"]
    ok_f = abs(f - 0.96) <= 0.02
    ok_p4 = peak4 < 0.02
    ok_theta = abs(theta - 0.74) <= 0.01
    ok = ok_f and ok_p4 and ok_theta
    assert report(
        6,
        ok,
        f"fidelity {f:.4f} (target 0.96 +- 0.02: {'ok' if ok_f else 'MISS'}), "
        f"level-4 peak {peak4:.4f} (<0.02: {'ok' if ok_p4 else 'MISS'}), "
        f"theta {theta:.4f} rad (0.74 +- 0.01: {'ok' if ok_theta else 'MISS'})",
    )


def test_criterion_7_intuitive_baseline(intuitive_result, intuitive_no_dissipation):
    f = intuitive_result.final_fidelity
    f_clean = intuitive_no_dissipation.final_fidelity
    ok = abs(f - 0.52) <= 0.05 and f_clean > 0.9
    assert report(
        7,
        ok,
        f"fidelity {f:.4f} (0.52 +- 0.05), dissipation-off rerun {f_clean:.4f} (>0.9)",
    )


def test_criterion_8_dfs_orderings(dfs_results):
    L = {k: v.final_fidelity for k, v in dfs_results.items()}
    o1 = L["dfs_independent"] > L["bare_independent"]
    o2 = L["dfs_common"] > L["dfs_independent"]
    o3 = L["bare_common"] < L["bare_independent"]
    ok = o1 and o2 and o3
    assert report(
        8,
        ok,
        "Bloch lengths at 100 us: "
        f"dfs_ind {L['dfs_independent']:.4f} > bare_ind {L['bare_independent']:.4f} ({o1}); "
        f"dfs_com {L['dfs_common']:.4f} > dfs_ind ({o2}); "
        f"bare_com {L['bare_common']:.4f} < bare_ind ({o3})",
    )


def test_criterion_9_conservation_suite(
    preparation_result,
    logic_flip_results,
    discrimination_results,
    single_c13_result,
    intuitive_result,
    dfs_results,
):
    worst_trace = 0.0
    worst_herm = 0.0
    worst_eig = 0.0
    n_states = 0
    for res in all_protocol_results(
        preparation_result,
        logic_flip_results,
        discrimination_results,
        single_c13_result,
        intuitive_result,
        dfs_results,
    ):
        for traj in trajectory_states(res):
            for rho in traj.states:
                n_states += 1
                worst_trace = max(worst_trace, abs(np.trace(rho) - 1.0))
                worst_herm = max(worst_herm, np.abs(rho - rho.conj().T).max())
                worst_eig = min(
                    worst_eig, np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min()
                )
    # singlet exactly dark under the common reservoir
    half = spin_half_operators()
    pair_iz = (pair_operator(half.iz, None), pair_operator(None, half.iz))
    common = build_dissipators(DissipatorSpec("common", 7.0, (500.0,)), None, pair_iz)
    rho_s = np.outer(SINGLET, SINGLET.conj())
    resid = np.abs(
        lindblad_rhs(rho_s, np.zeros((4, 4), dtype=complex), common)
    ).max()
    ok = (
        worst_trace <= 1e-8
        and worst_herm <= 1e-10
        and worst_eig >= -1e-8
        and resid <= 1e-14
    )
    assert report(
        9,
        ok,
        f"{n_states} states: |tr-1| {worst_trace:.2e} (<=1e-8), herm "
        f"{worst_herm:.2e} (<=1e-10), min eig {worst_eig:.2e} (>=-1e-8), "
        f"singlet dark residual {resid:.2e} (<=1e-14)",
    )


def test_criterion_10_determinism(tmp_path):
    import json

    def run(sub: str) -> bytes:
        out = tmp_path / sub
        args = SimpleNamespace(config=None, out=str(out), set=None, format="both", workers=1)
        assert dispatch("prepare", args) == EXIT_OK
        return (out / "trajectory.csv").read_bytes()

    a = run("a")
    b = run("b")
    # the documented artifact set of a default run
    for name in ("trajectory.csv", "summary.json", "fidelity.dat", "effective_config.json"):
        assert (tmp_path / "a" / name).exists()
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert abs(summary["final_fidelity"] - 0.874) <= 0.03
    ok = a == b
    assert report(
        10, ok, f"two prepare runs: trajectory.csv byte-identical ({len(a)} bytes)"
    )
