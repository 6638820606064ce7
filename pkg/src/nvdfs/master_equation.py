"""Markovian master equation integration and trajectory observables.

The equation of motion is

    drho/dt = -i [H(t), rho]
              + (1/T2e*) (2 Sz rho Sz - Sz^2 rho - rho Sz^2)
              + sum_i (1/T2n_i*) (2 L_i rho L_i - L_i^2 rho - rho L_i^2)

with Hermitian dephasing generators; rates multiply the bracket exactly
as written (no extra 1/2).  Nuclear reservoirs are either independent
(one generator per carbon) or common (a single collective Iz sum).

Dephasing generators are defined in the laboratory bare basis.  When the
dynamics runs in a rotating frame whose generator does not commute with a
dephasing operator, the operator picks up the exact frame phases
``L_ij -> L_ij exp(i (V_i - V_j) t)``; :class:`Dissipator` carries the
frequency matrix and the right-hand side applies it per evaluation (the
common static case is fast-pathed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .ode import NumericalError, solve_adaptive
from .operators import assert_hermitian

__all__ = [
    "DissipatorSpec",
    "Dissipator",
    "build_dissipators",
    "lindblad_rhs",
    "integrate",
    "Trajectory",
    "liouvillian",
    "fidelity",
    "bloch_length",
    "populations",
    "mean_energy",
    "NumericalError",
]


@dataclass(frozen=True)
class DissipatorSpec:
    """Transverse-relaxation model selection.

    mode:      "independent", "common" or "none"
    t2e_star:  NV dephasing time, us
    t2n_star:  per-carbon times (independent) or a single value (common)
    """

    mode: str = "independent"
    t2e_star: float = 7.0
    t2n_star: tuple[float, ...] = (500.0, 700.0)

    def __post_init__(self):
        if self.mode not in ("independent", "common", "none"):
            raise ValueError(f"unknown dissipator mode {self.mode!r}")
        if self.t2e_star <= 0:
            raise ValueError("t2e_star must be positive")
        times = tuple(np.atleast_1d(self.t2n_star).astype(float))
        if any(t <= 0 for t in times):
            raise ValueError("t2n_star entries must be positive")
        object.__setattr__(self, "t2n_star", times)


@dataclass(frozen=True)
class Dissipator:
    """One dephasing channel: rate, Hermitian generator, frame phases.

    ``frame_freqs`` is either ``None`` (generator commutes with the frame,
    no phases needed) or the antisymmetric matrix ``V_i - V_j`` in rad/us.
    """

    rate: float
    op: np.ndarray
    frame_freqs: np.ndarray | None = None

    def __post_init__(self):
        assert_hermitian(self.op, name="dissipator generator")
        if self.rate < 0:
            raise ValueError("dissipation rate must be nonnegative")

    def at(self, t: float) -> np.ndarray:
        if self.frame_freqs is None:
            return self.op
        return self.op * np.exp(1j * self.frame_freqs * t)


def build_dissipators(
    spec: DissipatorSpec,
    sz_op: np.ndarray | None,
    iz_ops: Sequence[np.ndarray],
    frame_diag: np.ndarray | None = None,
    drop_tol: float = 1e-14,
) -> tuple[Dissipator, ...]:
    """Assemble dephasing channels for the current representation.

    ``sz_op`` / ``iz_ops`` are the NV Sz and per-carbon Iz operators
    expressed in whatever basis the dynamics uses (restricted and/or
    rotated); pass ``sz_op=None`` when the electron manifold makes it
    vanish identically.  ``frame_diag`` is the diagonal of the rotating
    frame generator in the same basis; operators that commute with it are
    kept static, the rest carry exact time-dependent phases.

    Channels whose generator is numerically zero are dropped.
    """
    if spec.mode == "none":
        return ()
    chans: list[Dissipator] = []

    def add(rate: float, op: np.ndarray):
        op = np.asarray(op, dtype=complex)
        if np.abs(op).max() <= drop_tol:
            return
        freqs = None
        if frame_diag is not None:
            fmat = frame_diag[:, None] - frame_diag[None, :]
            if np.abs(fmat * (np.abs(op) > drop_tol)).max() > 1e-12:
                freqs = fmat
        chans.append(Dissipator(rate=rate, op=op, frame_freqs=freqs))

    if sz_op is not None:
        add(1.0 / spec.t2e_star, sz_op)
    if spec.mode == "independent":
        if len(spec.t2n_star) < len(iz_ops):
            raise ValueError("independent reservoirs need one t2n_star per carbon")
        for t2n, iz in zip(spec.t2n_star, iz_ops):
            add(1.0 / t2n, iz)
    elif spec.mode == "common":
        if iz_ops:
            total = np.sum(iz_ops, axis=0)
            add(1.0 / spec.t2n_star[0], total)
    return tuple(chans)


def _apply_dissipator(rho: np.ndarray, L: np.ndarray) -> np.ndarray:
    L2 = L @ L
    return 2.0 * (L @ rho @ L) - L2 @ rho - rho @ L2


def lindblad_rhs(
    rho: np.ndarray,
    h: np.ndarray,
    dissipators: Sequence[Dissipator] = (),
    t: float = 0.0,
) -> np.ndarray:
    """Right-hand side of the master equation at one instant.

    ``h`` is the (already evaluated) Hamiltonian; each dissipator brings
    its rate and generator, with frame phases evaluated at ``t``.
    """
    if rho.shape != h.shape:
        raise ValueError("state and Hamiltonian dimensions differ")
    out = -1j * (h @ rho - rho @ h)
    for ch in dissipators:
        L = ch.at(t)
        out = out + ch.rate * _apply_dissipator(rho, L)
    return out


@dataclass
class Trajectory:
    """Time series of density matrices and named scalar observables."""

    times: np.ndarray
    states: np.ndarray | None
    observables: dict[str, np.ndarray] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def final_state(self) -> np.ndarray:
        if self.states is None:
            raise ValueError("trajectory was run without state storage")
        return self.states[-1]

    def observable(self, name: str) -> np.ndarray:
        return self.observables[name]

    def shifted(self, offset: float) -> "Trajectory":
        return Trajectory(
            times=self.times + offset,
            states=self.states,
            observables=dict(self.observables),
            meta=dict(self.meta),
        )


def integrate(
    rho0: np.ndarray,
    h_of_t: Callable[[float], np.ndarray] | np.ndarray,
    dissipators: Sequence[Dissipator],
    t_span: tuple[float, float],
    rtol: float = 1e-8,
    atol: float = 1e-10,
    max_step: float = 0.1,
    report_points: int = 500,
    breakpoints: Sequence[float] = (),
    observables: dict[str, Callable[[float, np.ndarray], float]] | None = None,
) -> Trajectory:
    """Integrate the master equation over ``t_span``.

    ``h_of_t`` is a callable returning the Hamiltonian at time ``t`` (a
    constant matrix is also accepted).  States are sampled on a uniform
    reporting grid of ``report_points`` points; adaptive internal steps
    never straddle a breakpoint or a report time.  ``observables`` maps
    names to functions of (t, rho) evaluated on the reporting grid.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.ndim != 2 or rho0.shape[0] != rho0.shape[1]:
        raise ValueError("rho0 must be a square matrix")
    if abs(np.trace(rho0) - 1.0) > 1e-8:
        raise ValueError("rho0 must have unit trace")

    if callable(h_of_t):
        h_fun = h_of_t
    else:
        h_const = np.asarray(h_of_t, dtype=complex)
        h_fun = lambda t: h_const  # noqa: E731

    def rhs(t: float, rho: np.ndarray) -> np.ndarray:
        return lindblad_rhs(rho, h_fun(t), dissipators, t)

    t_report = np.linspace(t_span[0], t_span[1], int(report_points))
    states, stats = solve_adaptive(
        rhs,
        rho0,
        t_span,
        t_report,
        rtol=rtol,
        atol=atol,
        max_step=max_step,
        breakpoints=breakpoints,
    )
    obs: dict[str, np.ndarray] = {}
    if observables:
        for name, fun in observables.items():
            obs[name] = np.array([fun(t, rho) for t, rho in zip(t_report, states)])
    meta = {"rtol": rtol, "atol": atol, "max_step": max_step, **stats}
    return Trajectory(times=t_report, states=states, observables=obs, meta=meta)


def liouvillian(h: np.ndarray, dissipators: Sequence[Dissipator] = ()) -> np.ndarray:
    """Matrix of the static master-equation superoperator.

    Acts on row-major vectorized density matrices:
    ``vec(drho/dt) = liouvillian(...) @ vec(rho)``.  Only valid for
    static dissipators (no frame phases).  Used as the independent
    propagation route when cross-checking the adaptive integrator.
    """
    h = np.asarray(h, dtype=complex)
    d = h.shape[0]
    eye = np.eye(d, dtype=complex)
    out = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for ch in dissipators:
        if ch.frame_freqs is not None:
            raise ValueError("liouvillian supports static dissipators only")
        L = ch.op
        L2 = L @ L
        out = out + ch.rate * (
            2.0 * np.kron(L, L.T) - np.kron(L2, eye) - np.kron(eye, L2.T)
        )
    return out


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------


def fidelity(rho: np.ndarray, target: np.ndarray) -> float:
    """Overlap Tr[rho |target><target|], clamped onto [0, 1].

    Values outside [-1e-8, 1 + 1e-8] (beyond what trace/positivity drift
    of a tolerance-controlled integration can produce) raise.
    """
    rho = np.asarray(rho, dtype=complex)
    target = np.asarray(target, dtype=complex)
    if rho.shape[0] != target.shape[0]:
        raise ValueError("state and target dimensions differ")
    val = float(np.real(target.conj() @ rho @ target))
    if val < -1e-8 or val > 1.0 + 1e-8:
        raise ValueError(f"fidelity {val} outside [0, 1] beyond numerical slack")
    return min(max(val, 0.0), 1.0)


def bloch_length(rho: np.ndarray, basis0: np.ndarray, basis1: np.ndarray) -> float:
    """Length of the Bloch vector of the qubit spanned by two basis states.

    Effective Pauli operators are built on span{basis0, basis1}; the three
    expectations are taken on ``rho`` as-is (population leaked out of the
    span simply shortens the vector).  The basis states must be orthonormal.
    """
    b0 = np.asarray(basis0, dtype=complex)
    b1 = np.asarray(basis1, dtype=complex)
    for v in (b0, b1):
        if abs(np.linalg.norm(v) - 1.0) > 1e-10:
            raise ValueError("Bloch basis states must be normalized")
    if abs(b0.conj() @ b1) > 1e-10:
        raise ValueError("Bloch basis states must be orthogonal")
    rho01 = b0.conj() @ rho @ b1
    p0 = np.real(b0.conj() @ rho @ b0)
    p1 = np.real(b1.conj() @ rho @ b1)
    sx = 2.0 * np.real(rho01)
    sy = -2.0 * np.imag(rho01)
    sz = p0 - p1
    return float(np.sqrt(sx * sx + sy * sy + sz * sz))


def populations(rho: np.ndarray, eigenstates: np.ndarray) -> np.ndarray:
    """Diagonal expectations Tr[rho |v_i><v_i|] for state columns ``v_i``."""
    v = np.asarray(eigenstates, dtype=complex)
    vals = np.real(np.einsum("ji,jk,ki->i", v.conj(), rho, v))
    total = vals.sum()
    if total > 1.0 + 1e-8:
        raise ValueError(f"populations sum to {total} > 1")
    return vals


def mean_energy(rho: np.ndarray, h: np.ndarray) -> float:
    """Tr[rho H]; the imaginary residual must vanish within scale*1e-10."""
    rho = np.asarray(rho, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if rho.shape != h.shape:
        raise ValueError("state and Hamiltonian dimensions differ")
    val = complex(np.trace(rho @ h))
    scale = max(1.0, float(np.abs(h).max()))
    if abs(val.imag) > 1e-10 * scale:
        raise ValueError(f"mean energy has imaginary residual {val.imag:.3e}")
    return val.real
