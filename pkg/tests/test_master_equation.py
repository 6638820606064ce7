import numpy as np
import pytest
from scipy.linalg import expm

from nvdfs.eigensystem import SINGLET
from nvdfs.hamiltonians import RegisterConfig, h_ms0
from nvdfs.master_equation import (
    Dissipator,
    DissipatorSpec,
    NumericalError,
    bloch_length,
    build_dissipators,
    fidelity,
    integrate,
    lindblad_rhs,
    liouvillian,
    mean_energy,
    populations,
)
from nvdfs.operators import pair_operator, spin_half_operators

CFG = RegisterConfig()
HALF = spin_half_operators()
PAIR_IZ = (pair_operator(HALF.iz, None), pair_operator(None, HALF.iz))


def random_density(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def pure_state_density(dim, seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


# --- rhs -------------------------------------------------------------------


def test_rhs_zero_for_diagonal_state_pure_dephasing():
    rho = np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex)
    diss = build_dissipators(
        DissipatorSpec("independent", 7.0, (500.0, 700.0)), None, PAIR_IZ
    )
    out = lindblad_rhs(rho, np.zeros((4, 4), dtype=complex), diss)
    assert np.abs(out).max() <= 1e-16


def test_rhs_electron_channel_vanishes_when_sz_zero():
    # the NV in its zero-projection manifold contributes a zero operator;
    # the builder drops the channel entirely
    diss = build_dissipators(
        DissipatorSpec("independent", 7.0, (500.0, 700.0)),
        np.zeros((4, 4), dtype=complex),
        PAIR_IZ,
    )
    assert len(diss) == 2  # only the two nuclear channels remain


def test_singlet_dark_under_common_reservoir():
    rho = np.outer(SINGLET, SINGLET.conj())
    diss = build_dissipators(DissipatorSpec("common", 7.0, (500.0,)), None, PAIR_IZ)
    out = lindblad_rhs(rho, np.zeros((4, 4), dtype=complex), diss)
    assert np.abs(out).max() <= 1e-14


def test_common_reservoir_dark_subspace():
    """Any state supported on the zero-collective-Iz subspace is dark."""
    diss = build_dissipators(DissipatorSpec("common", 7.0, (500.0,)), None, PAIR_IZ)
    du = np.array([0, 1, 0, 0], dtype=complex)
    ud = np.array([0, 0, 1, 0], dtype=complex)
    rng = np.random.default_rng(8)
    for _ in range(5):
        c = rng.normal(size=2) + 1j * rng.normal(size=2)
        psi = (c[0] * du + c[1] * ud)
        psi /= np.linalg.norm(psi)
        rho = np.outer(psi, psi.conj())
        out = lindblad_rhs(rho, np.zeros((4, 4), dtype=complex), diss)
        assert np.abs(out).max() <= 1e-14


def test_rhs_dimension_mismatch():
    with pytest.raises(ValueError):
        lindblad_rhs(np.eye(4, dtype=complex) / 4, np.eye(3, dtype=complex))


def test_dissipator_spec_validation():
    with pytest.raises(ValueError):
        DissipatorSpec(mode="bogus")
    with pytest.raises(ValueError):
        DissipatorSpec(t2e_star=-1.0)
    with pytest.raises(ValueError):
        DissipatorSpec(t2n_star=(0.0,))


# --- integrate -------------------------------------------------------------


def test_integrate_identity_without_dynamics():
    rho0 = random_density(4, 1)
    traj = integrate(rho0, np.zeros((4, 4), dtype=complex), (), (0.0, 50.0))
    assert np.abs(traj.final_state - rho0).max() <= 1e-10


def test_integrate_matches_matrix_exponential():
    """Unitary propagation against the dense matrix-exponential oracle."""
    h = h_ms0((100.0, 70.0), CFG)
    rho0 = pure_state_density(4, 2)
    traj = integrate(
        rho0, h, (), (0.0, 100.0), rtol=1e-10, atol=1e-12, report_points=51
    )
    worst = 0.0
    for t, rho in zip(traj.times, traj.states):
        u = expm(-1j * h * t)
        worst = max(worst, np.abs(rho - u @ rho0 @ u.conj().T).max())
    assert worst <= 1e-8


def test_integrate_matches_liouvillian_exponential():
    """Dissipative piecewise-constant propagation against the vectorized
    superoperator exponential."""
    h1 = h_ms0((100.0, 5.0), CFG)
    h2 = h_ms0((30.0, 70.0), CFG)
    diss = build_dissipators(
        DissipatorSpec("independent", 7.0, (50.0, 70.0)), None, PAIR_IZ
    )
    rho0 = pure_state_density(4, 3)

    def h_of_t(t):
        return h1 if t < 50.0 else h2

    traj = integrate(
        rho0, h_of_t, diss, (0.0, 100.0), report_points=201, breakpoints=[50.0]
    )
    m1 = expm(liouvillian(h1, diss) * (traj.times[1] - traj.times[0]))
    m2 = expm(liouvillian(h2, diss) * (traj.times[1] - traj.times[0]))
    vec = rho0.flatten()
    worst = 0.0
    for i in range(1, traj.times.size):
        vec = (m1 if traj.times[i] <= 50.0 + 1e-9 else m2) @ vec
        worst = max(worst, np.abs(traj.states[i] - vec.reshape(4, 4)).max())
    assert worst <= 1e-6


def test_integrate_rejects_bad_initial_state():
    rho = np.eye(4, dtype=complex)  # trace 4
    with pytest.raises(ValueError):
        integrate(rho, np.zeros((4, 4), dtype=complex), (), (0.0, 1.0))


def test_integrate_step_underflow_aborts():
    rho0 = np.diag([1.0, 0.0]).astype(complex)

    def exploding(t):
        g = 1.0 / max(1.0 - t, 1e-15) ** 2
        return np.array([[0.0, g], [g, 0.0]], dtype=complex)

    with pytest.raises(NumericalError):
        integrate(rho0, exploding, (), (0.0, 1.5), max_step=0.5)


def test_dephasing_monotone_offdiagonals():
    diss = build_dissipators(
        DissipatorSpec("independent", 7.0, (20.0, 30.0)), None, PAIR_IZ
    )
    rho0 = random_density(4, 4)
    traj = integrate(rho0, np.zeros((4, 4), dtype=complex), diss, (0.0, 60.0))
    mags = np.abs(traj.states)[:, ~np.eye(4, dtype=bool)]
    diffs = np.diff(mags, axis=0)
    assert diffs.max() <= 1e-10


def test_frame_phases_preserve_trace_and_hermiticity():
    h = np.diag([0.0, 1.0, 5.0, 7.0]).astype(complex)
    op = pair_operator(HALF.iz, None)
    freqs = np.array([0.0, 0.3, 2.0, 2.5])
    ch = Dissipator(rate=0.05, op=op, frame_freqs=freqs[:, None] - freqs[None, :])
    rho0 = random_density(4, 5)
    traj = integrate(rho0, h, (ch,), (0.0, 40.0))
    for rho in traj.states[::50]:
        assert abs(np.trace(rho) - 1.0) <= 1e-9
        assert np.abs(rho - rho.conj().T).max() <= 1e-10


def test_liouvillian_rejects_time_dependent_channels():
    op = pair_operator(HALF.iz, None)
    ch = Dissipator(rate=0.1, op=op, frame_freqs=np.ones((4, 4)) - np.eye(4))
    with pytest.raises(ValueError):
        liouvillian(np.zeros((4, 4), dtype=complex), (ch,))


# --- observables -----------------------------------------------------------


def test_fidelity_pure_and_mixed():
    target = np.array([0, 1, 0, 0], dtype=complex)
    assert fidelity(np.outer(target, target.conj()), target) == 1.0
    assert fidelity(np.eye(4, dtype=complex) / 4.0, target) == pytest.approx(0.25)


def test_fidelity_clips_numerical_slack():
    target = np.array([1.0, 0.0], dtype=complex)
    rho = np.diag([1.0 + 5e-9, -5e-9]).astype(complex)
    assert fidelity(rho, target) == 1.0
    with pytest.raises(ValueError):
        fidelity(np.diag([1.5, -0.5]).astype(complex), target)


def test_bloch_length_cardinal_cases():
    b0 = np.array([1, 0, 0, 0], dtype=complex)
    b1 = np.array([0, 0, 0, 1], dtype=complex)
    plus = (b0 + b1) / np.sqrt(2)
    assert bloch_length(np.outer(plus, plus.conj()), b0, b1) == pytest.approx(1.0)
    mixed = 0.5 * (np.outer(b0, b0.conj()) + np.outer(b1, b1.conj()))
    assert bloch_length(mixed, b0, b1) == pytest.approx(0.0, abs=1e-14)


def test_bloch_length_rejects_nonorthogonal_basis():
    b0 = np.array([1, 0], dtype=complex)
    b1 = np.array([1, 1], dtype=complex) / np.sqrt(2)
    with pytest.raises(ValueError):
        bloch_length(np.eye(2, dtype=complex) / 2, b0, b1)


def test_populations_complete_basis():
    rho = random_density(4, 6)
    pops = populations(rho, np.eye(4, dtype=complex))
    assert pops.sum() == pytest.approx(1.0, abs=1e-12)
    basis0 = np.zeros((4, 1), dtype=complex)
    basis0[2, 0] = 1.0
    target = np.outer(basis0[:, 0], basis0[:, 0].conj())
    assert populations(target, np.eye(4, dtype=complex))[2] == pytest.approx(1.0)


def test_mean_energy_eigenstate_and_mixed():
    h = np.diag([1.0, 2.0, 5.0]).astype(complex)
    e1 = np.zeros((3, 3), dtype=complex)
    e1[1, 1] = 1.0
    assert mean_energy(e1, h) == pytest.approx(2.0)
    assert mean_energy(np.eye(3, dtype=complex) / 3, h) == pytest.approx(8.0 / 3.0)
