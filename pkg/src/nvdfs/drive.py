"""Microwave driving: Gaussian pulse plans and rotating-frame Hamiltonians.

Population transfer runs between eigenstates of the m_s=0 manifold through
an m_s=+1 intermediate, driven by two Gaussian microwave tones (pump and
Stokes).  This module builds:

* the level systems (energies, eigenstates, NV-flip coupling matrix chi)
  for the two-carbon register restricted to {m_s=0, m_s=+1} (8 levels)
  and for the single-carbon register (4 levels);
* pulse plans for counter-intuitive (Stokes-first), reversed and
  sequential orderings;
* the multi-rotating-frame Hamiltonian with either the resonant coupling
  set only ("displayed") or every NV-flip coupling with its exact residual
  phase ("full");
* a laboratory-frame single-carbon Hamiltonian for checking the
  rotating-wave approximation against the full oscillatory drive.

The rotating frame is generated by V = E_p |p><p| + (E_p + w_p - w_s)
|s><s| + (E_p + w_p) P(m_s=+1), where p/s are the m_s=0 levels addressed
by the pump and Stokes carriers.  With resonant carriers every coupling
retained in "displayed" mode is exactly static.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eigensystem import (
    BipartiteEigensystem,
    Ms0Eigensystem,
    bipartite_eigensystem,
    ms0_eigensystem,
    numerical_eig,
)
from .hamiltonians import (
    RegisterConfig,
    h_ms1_full,
    h_ms1_simple,
    manifold_indices,
)
from .operators import assert_hermitian, pair_operator, spin_half_operators

__all__ = [
    "GaussianPulse",
    "PulsePlan",
    "make_stirap_plan",
    "make_intuitive_plan",
    "LevelSystem",
    "build_tripartite_levels",
    "build_bipartite_levels",
    "chi_coefficients",
    "nv_flip_operator",
    "RotatingFrame",
    "make_rotating_frame",
    "rotating_h_tripartite",
    "rotating_h_bipartite",
    "lab_frame_h_bipartite",
]


# ---------------------------------------------------------------------------
# pulses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianPulse:
    """One Gaussian microwave tone.

    omega0:  peak Rabi angular frequency, rad/us
    center:  envelope center, us
    sigma:   envelope width, us
    role:    "pump" or "stokes"
    carrier: carrier angular frequency, rad/us (bound from a rotating
             frame; only needed for laboratory-frame integration)
    """

    omega0: float
    center: float
    sigma: float
    role: str
    carrier: float | None = None

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("pulse width sigma must be positive")
        if self.role not in ("pump", "stokes"):
            raise ValueError(f"unknown pulse role {self.role!r}")

    def envelope(self, t) -> np.ndarray | float:
        return self.omega0 * np.exp(-((t - self.center) ** 2) / (2.0 * self.sigma**2))


@dataclass(frozen=True)
class PulsePlan:
    """A timed set of pulses with a declared ordering.

    ordering is one of "stirap" (Stokes center precedes pump center),
    "b_stirap" (reversed) or "intuitive" (pump first, independent widths).
    The declared ordering is validated against the pulse centers.
    """

    pulses: tuple[GaussianPulse, ...]
    t_start: float
    t_end: float
    ordering: str

    def __post_init__(self):
        if self.t_end <= self.t_start:
            raise ValueError("pulse plan must span positive time")
        if self.ordering not in ("stirap", "b_stirap", "intuitive"):
            raise ValueError(f"unknown ordering {self.ordering!r}")
        pump = self.pulse("pump")
        stokes = self.pulse("stokes")
        if self.ordering == "stirap" and not stokes.center < pump.center:
            raise ValueError("stirap ordering requires the Stokes pulse first")
        if self.ordering == "b_stirap" and not pump.center < stokes.center:
            raise ValueError("b_stirap ordering requires the pump pulse first")
        if self.ordering == "intuitive" and not pump.center < stokes.center:
            raise ValueError("intuitive ordering requires the pump pulse first")

    def pulse(self, role: str) -> GaussianPulse:
        for p in self.pulses:
            if p.role == role:
                return p
        raise ValueError(f"plan has no {role!r} pulse")

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    def envelope(self, role: str, t) -> np.ndarray | float:
        return self.pulse(role).envelope(t)

    def bind_carriers(self, omega_p: float, omega_s: float) -> "PulsePlan":
        bound = tuple(
            GaussianPulse(
                omega0=p.omega0,
                center=p.center,
                sigma=p.sigma,
                role=p.role,
                carrier=omega_p if p.role == "pump" else omega_s,
            )
            for p in self.pulses
        )
        return PulsePlan(bound, self.t_start, self.t_end, self.ordering)

    def to_config(self) -> dict:
        """JSON-compatible record; round-trips through :meth:`from_config`."""
        return {
            "ordering": self.ordering,
            "t_start_us": self.t_start,
            "t_end_us": self.t_end,
            "pulses": [
                {
                    "role": p.role,
                    "omega0_rad_per_us": p.omega0,
                    "center_us": p.center,
                    "sigma_us": p.sigma,
                    "carrier_rad_per_us": p.carrier,
                }
                for p in self.pulses
            ],
        }

    @staticmethod
    def from_config(doc: dict) -> "PulsePlan":
        pulses = tuple(
            GaussianPulse(
                omega0=p["omega0_rad_per_us"],
                center=p["center_us"],
                sigma=p["sigma_us"],
                role=p["role"],
                carrier=p.get("carrier_rad_per_us"),
            )
            for p in doc["pulses"]
        )
        return PulsePlan(pulses, doc["t_start_us"], doc["t_end_us"], doc["ordering"])


def _check_edges(
    pulses: tuple[GaussianPulse, ...],
    t_span: tuple[float, float],
    edge_fraction: float | None,
) -> None:
    if edge_fraction is None:
        return
    t0, t1 = t_span
    worst = max(
        max(p.envelope(t0), p.envelope(t1)) / p.omega0 for p in pulses
    )
    if worst > edge_fraction:
        need = max(
            abs(p.center - (t0 + t1) / 2.0)
            + p.sigma * np.sqrt(2.0 * np.log(1.0 / edge_fraction))
            for p in pulses
        )
        raise ValueError(
            f"pulse span {t1 - t0} us truncates a Gaussian at {worst:.2e} of "
            f"its peak; need at least {2.0 * need:.1f} us (or relax "
            "edge_fraction for deliberately truncated windows)"
        )


def make_stirap_plan(
    omega0: float,
    sigma: float,
    order: str,
    t_span: tuple[float, float],
    t_delay: float | None = None,
    edge_fraction: float | None = 1e-4,
) -> PulsePlan:
    """Two equal-width Gaussians around the span midpoint.

    ``order`` is "stirap" (Stokes first) or "b_stirap" (pump first); the
    center-to-center delay defaults to sqrt(2)*sigma.  With the default
    ``edge_fraction`` the span must leave both envelopes below 1e-4 of
    peak at the boundaries; pass ``None`` to allow truncated windows.
    """
    if order not in ("stirap", "b_stirap"):
        raise ValueError(f"unknown STIRAP order {order!r}")
    td = np.sqrt(2.0) * sigma if t_delay is None else float(t_delay)
    mid = 0.5 * (t_span[0] + t_span[1])
    first, second = mid - td / 2.0, mid + td / 2.0
    stokes_center, pump_center = (first, second) if order == "stirap" else (second, first)
    pulses = (
        GaussianPulse(omega0=omega0, center=pump_center, sigma=sigma, role="pump"),
        GaussianPulse(omega0=omega0, center=stokes_center, sigma=sigma, role="stokes"),
    )
    _check_edges(pulses, t_span, edge_fraction)
    return PulsePlan(pulses, t_span[0], t_span[1], order)


def make_intuitive_plan(
    omega0: float,
    sigma_p: float,
    sigma_s: float,
    t_span: tuple[float, float],
    t_delay: float,
    edge_fraction: float | None = 1e-4,
) -> PulsePlan:
    """Sequential pump-then-Stokes plan with independent widths.

    Pulse centers sit at the span midpoint -/+ ``t_delay/2`` with the pump
    first (direct two-step transfer through the intermediate level).
    """
    if t_delay <= 0:
        raise ValueError("intuitive plan needs a positive pump->Stokes delay")
    mid = 0.5 * (t_span[0] + t_span[1])
    pulses = (
        GaussianPulse(omega0=omega0, center=mid - t_delay / 2.0, sigma=sigma_p, role="pump"),
        GaussianPulse(omega0=omega0, center=mid + t_delay / 2.0, sigma=sigma_s, role="stokes"),
    )
    _check_edges(pulses, t_span, edge_fraction)
    return PulsePlan(pulses, t_span[0], t_span[1], "intuitive")


# ---------------------------------------------------------------------------
# level systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LevelSystem:
    """Eigenlevels of the driven register on the {m_s=0, m_s=+1} manifold.

    energies:  (n,) laboratory energies in level-label order
    states:    (n, n) complex; column j is level j in the restricted bare
               basis (m_s=+1 block first, then m_s=0, each block in the
               nuclear basis order of the underlying Hamiltonian)
    n_ms0:     labels 0..n_ms0-1 belong to m_s=0, the rest to m_s=+1
    chi:       (n, n) NV-flip coupling matrix <i|V|j>
    sz_eig:    NV Sz in the level basis (diagonal 0/1 projector)
    iz_eig:    per-carbon nuclear Iz operators in the level basis
    """

    energies: np.ndarray
    states: np.ndarray
    n_ms0: int
    chi: np.ndarray
    sz_eig: np.ndarray
    iz_eig: tuple[np.ndarray, ...]
    ms0: Ms0Eigensystem | None = None
    bipartite: BipartiteEigensystem | None = None

    @property
    def dim(self) -> int:
        return self.energies.size

    @property
    def ms0_labels(self) -> range:
        return range(self.n_ms0)

    @property
    def ms1_labels(self) -> range:
        return range(self.n_ms0, self.dim)


def nv_flip_operator(block_dim: int) -> np.ndarray:
    """Hermitian NV flip |+1><0| + |0><+1| on the restricted bare basis.

    The restricted basis stacks the m_s=+1 block above the m_s=0 block,
    each of nuclear dimension ``block_dim``.
    """
    eye = np.eye(block_dim, dtype=complex)
    v = np.zeros((2 * block_dim, 2 * block_dim), dtype=complex)
    v[:block_dim, block_dim:] = eye
    v[block_dim:, :block_dim] = eye
    return v


def chi_coefficients(levels: LevelSystem, v: np.ndarray | None = None) -> np.ndarray:
    """Coupling matrix chi_ij = <i|V|j> between level labels.

    ``v`` defaults to the Hermitian NV flip on the restricted bare basis;
    a custom operator must be Hermitian.
    """
    if v is None:
        v = nv_flip_operator(levels.dim // 2)
    assert_hermitian(np.asarray(v, dtype=complex), name="coupling operator V")
    return levels.states.conj().T @ v @ levels.states


def _assemble_levels(
    ms0_energies: np.ndarray,
    ms0_states_nuc: np.ndarray,
    ms1_energies: np.ndarray,
    ms1_states_nuc: np.ndarray,
    iz_nuc_ops: tuple[np.ndarray, ...],
    **extra,
) -> LevelSystem:
    """Stack manifold eigenstates into one level system.

    Nuclear-state columns are given per manifold on the manifold's nuclear
    basis (dimension b); the restricted bare basis is [m_s=+1; m_s=0].
    """
    b = ms0_states_nuc.shape[0]
    n = 2 * b
    states = np.zeros((n, n), dtype=complex)
    states[b:, :b] = ms0_states_nuc
    states[:b, b:] = ms1_states_nuc
    energies = np.concatenate([ms0_energies, ms1_energies])

    sz_bare = np.zeros((n, n), dtype=complex)
    sz_bare[:b, :b] = np.eye(b)
    iz_eig = tuple(
        states.conj().T @ np.kron(np.eye(2, dtype=complex), iz) @ states
        for iz in iz_nuc_ops
    )
    sz_eig = states.conj().T @ sz_bare @ states
    chi = states.conj().T @ nv_flip_operator(b) @ states
    return LevelSystem(
        energies=energies,
        states=states,
        n_ms0=b,
        chi=chi,
        sz_eig=sz_eig,
        iz_eig=iz_eig,
        **extra,
    )


def build_tripartite_levels(
    b: tuple[float, float],
    cfg: RegisterConfig,
    ms1_mode: str = "simple",
) -> LevelSystem:
    """Level system of the two-carbon register at static fields ``b``.

    ``ms1_mode`` picks the m_s=+1 manifold model: "simple" (diagonal
    secular Hamiltonian, bare eigenstates) or "full" (keeps nuclear
    Zeeman and anisotropic hyperfine; eigenstates solved numerically and
    labeled by overlap with the bare basis).
    """
    ms0 = ms0_eigensystem(b, cfg.d12, cfg.constants.gamma_c)
    if ms1_mode == "simple":
        h1 = h_ms1_simple(b, cfg)
        ms1_energies = np.real(np.diag(h1))
        ms1_states = np.eye(4, dtype=complex)
    elif ms1_mode == "full":
        h1 = h_ms1_full(b, cfg)
        w, v = numerical_eig(h1)
        # label by dominant bare component so level k tracks bare state k
        order = np.argmax(np.abs(v), axis=0)
        if sorted(order) != [0, 1, 2, 3]:
            raise ValueError("m_s=+1 eigenstates are too mixed to label by bare basis")
        perm = np.argsort(order, kind="stable")
        ms1_energies = w[perm]
        ms1_states = v[:, perm]
    else:
        raise ValueError(f"unknown ms1_mode {ms1_mode!r}")

    half = spin_half_operators()
    iz_ops = (pair_operator(half.iz, None), pair_operator(None, half.iz))
    return _assemble_levels(
        ms0.energies, ms0.states, ms1_energies, ms1_states, iz_ops, ms0=ms0
    )


def build_bipartite_levels(b: tuple[float, float], cfg: RegisterConfig) -> LevelSystem:
    """Level system of the single-carbon register restricted to {0, +1}."""
    eig = bipartite_eigensystem(b, cfg)
    idx = manifold_indices(6, "both")
    # labels 1, 2 are m_s=0; labels 3, 4 are m_s=+1 bare states
    ms0_states = eig.states[np.ix_(idx[2:], [0, 1])]
    ms1_states = eig.states[np.ix_(idx[:2], [2, 3])]
    half = spin_half_operators()
    return _assemble_levels(
        eig.energies[:2],
        ms0_states,
        eig.energies[2:4],
        ms1_states,
        (half.iz,),
        bipartite=eig,
    )


# ---------------------------------------------------------------------------
# rotating frame
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RotatingFrame:
    """Multi-rotating frame for a pump/Stokes pair on a level system.

    pump_level / stokes_level are m_s=0 label indices (0-based); for a
    counter-intuitive transfer the pump level is the initially occupied
    state and the Stokes level the target.  ``vdiag`` is the frame
    generator diagonal in the level basis; ``detunings`` collects the
    one-photon detunings per m_s=+1 label plus the two-photon detuning
    under key "delta".
    """

    pump_level: int
    stokes_level: int
    intermediate: int
    omega_p: float
    omega_s: float
    vdiag: np.ndarray
    detunings: dict = field(default_factory=dict)

    @property
    def delta(self) -> float:
        return self.detunings["delta"]


def make_rotating_frame(
    levels: LevelSystem,
    pump_level: int,
    stokes_level: int,
    intermediate: int,
    omega_p: float | None = None,
    omega_s: float | None = None,
    expected_detunings: dict | None = None,
) -> RotatingFrame:
    """Build the frame for the given transition assignment.

    Carriers default to exact resonance: ``omega_p = E_int - E_pump`` and
    ``omega_s = E_int - E_stokes``.  When ``expected_detunings`` is given,
    each named value is checked against the computed one and any mismatch
    beyond 1e-9 rad/us is rejected.
    """
    e = levels.energies
    if pump_level not in levels.ms0_labels or stokes_level not in levels.ms0_labels:
        raise ValueError("pump and Stokes levels must be m_s=0 labels")
    if intermediate not in levels.ms1_labels:
        raise ValueError("intermediate level must be an m_s=+1 label")
    if pump_level == stokes_level:
        raise ValueError("pump and Stokes levels must differ")
    wp = e[intermediate] - e[pump_level] if omega_p is None else float(omega_p)
    ws = e[intermediate] - e[stokes_level] if omega_s is None else float(omega_s)

    vdiag = np.zeros(levels.dim)
    vdiag[pump_level] = e[pump_level]
    vdiag[stokes_level] = e[pump_level] + wp - ws
    for i in levels.ms1_labels:
        vdiag[i] = e[pump_level] + wp

    detunings = {"delta": e[stokes_level] - vdiag[stokes_level]}
    for i in levels.ms1_labels:
        detunings[f"one_photon_{i}"] = e[i] - e[pump_level] - wp
    if expected_detunings:
        for key, val in expected_detunings.items():
            if key not in detunings:
                raise ValueError(f"unknown detuning key {key!r}")
            if abs(detunings[key] - val) > 1e-9:
                raise ValueError(
                    f"detuning {key} = {detunings[key]} inconsistent with "
                    f"declared value {val} for the given carriers"
                )
    return RotatingFrame(
        pump_level=pump_level,
        stokes_level=stokes_level,
        intermediate=intermediate,
        omega_p=wp,
        omega_s=ws,
        vdiag=vdiag,
        detunings=detunings,
    )


def _rotating_h(
    t: float,
    levels: LevelSystem,
    plan: PulsePlan,
    frame: RotatingFrame,
    coupling_mode: str,
) -> np.ndarray:
    n = levels.dim
    h = np.zeros((n, n), dtype=complex)
    np.fill_diagonal(h, levels.energies - frame.vdiag)

    amp_p = 0.5 * plan.envelope("pump", t)
    amp_s = 0.5 * plan.envelope("stokes", t)
    chi = levels.chi
    if coupling_mode == "displayed":
        for i in levels.ms1_labels:
            h[i, frame.pump_level] += amp_p * chi[i, frame.pump_level]
            h[i, frame.stokes_level] += amp_s * chi[i, frame.stokes_level]
    elif coupling_mode == "full":
        for i in levels.ms1_labels:
            for j in levels.ms0_labels:
                if chi[i, j] == 0.0:
                    continue
                dv = frame.vdiag[i] - frame.vdiag[j]
                h[i, j] += amp_p * chi[i, j] * np.exp(1j * (dv - frame.omega_p) * t)
                h[i, j] += amp_s * chi[i, j] * np.exp(1j * (dv - frame.omega_s) * t)
    else:
        raise ValueError(f"unknown coupling mode {coupling_mode!r}")
    # drive terms fill the lower triangle (m_s=+1 rows); mirror them up
    iu = np.triu_indices(n, 1)
    h[iu] = np.conj(h[(iu[1], iu[0])])
    return h


def rotating_h_tripartite(
    t: float,
    levels: LevelSystem,
    plan: PulsePlan,
    frame: RotatingFrame,
    coupling_mode: str = "displayed",
) -> np.ndarray:
    """8-level rotating-frame Hamiltonian of the driven two-carbon register."""
    if levels.dim != 8:
        raise ValueError("tripartite drive expects an 8-level system")
    return _rotating_h(t, levels, plan, frame, coupling_mode)


def rotating_h_bipartite(
    t: float,
    levels: LevelSystem,
    plan: PulsePlan,
    frame: RotatingFrame,
    coupling_mode: str = "displayed",
) -> np.ndarray:
    """4-level rotating-frame Hamiltonian of the driven one-carbon register."""
    if levels.dim != 4:
        raise ValueError("bipartite drive expects a 4-level system")
    return _rotating_h(t, levels, plan, frame, coupling_mode)


def lab_frame_h_bipartite(t: float, levels: LevelSystem, plan: PulsePlan) -> np.ndarray:
    """Laboratory-frame 4-level Hamiltonian with full oscillatory drive.

    Couplings carry cos(w t) factors for both tones (no rotating-wave
    approximation); pulse carriers must be bound on the plan.  Used to
    validate the rotating-frame treatment.
    """
    if levels.dim != 4:
        raise ValueError("laboratory-frame drive expects a 4-level system")
    drive = 0.0
    for p in plan.pulses:
        if p.carrier is None:
            raise ValueError("bind carriers on the plan before lab-frame integration")
        drive = drive + p.envelope(t) * np.cos(p.carrier * t)
    h = np.diag(levels.energies).astype(complex)
    chi = levels.chi
    for i in levels.ms1_labels:
        for j in levels.ms0_labels:
            h[i, j] += drive * chi[i, j]
            h[j, i] += drive * np.conj(chi[i, j])
    return h
