"""End-to-end register protocols.

Each runner covers one reference scenario of the register:

* ``run_dfs_comparison``  — Bloch-vector decay of the protected logical
  qubit vs a bare nuclear qubit, independent and common reservoirs;
* ``run_preparation``     — two adiabatic field ramps followed by a
  counter-intuitive (Stokes-first) transfer into the singlet;
* ``run_logic_flip``      — logical spin flip between the two register
  states through the m_s=+1 intermediate;
* ``run_stirap_vs_bstirap`` — same pulse ordering on both register
  states, exposing the dark-state path by the population that reaches the
  m_s=+1 manifold;
* ``run_single_c13``      — single-carbon nuclear-spin flip enabled by an
  off-axis field;
* ``run_intuitive_baseline`` — sequential pump-then-Stokes transfer, the
  dephasing-limited baseline the adiabatic passage beats.

Ramps are integrated in the laboratory m_s=0 frame with no drive; pulse
stages run in the rotating frame at frozen fields; the handoff re-expresses
the density matrix in the eigenbasis at those fields.  All stages carry
the configured dissipation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .drive import (
    LevelSystem,
    PulsePlan,
    build_bipartite_levels,
    build_tripartite_levels,
    make_intuitive_plan,
    make_rotating_frame,
    make_stirap_plan,
    rotating_h_bipartite,
    rotating_h_tripartite,
)
from .eigensystem import ms0_eigensystem, singlet_degeneracy_bz
from .hamiltonians import (
    FieldSchedule,
    RegisterConfig,
    h_ms0,
    mhz,
)
from .master_equation import (
    DissipatorSpec,
    Trajectory,
    bloch_length,
    build_dissipators,
    integrate,
    mean_energy,
)
from .operators import pair_operator, spin_half_operators

__all__ = [
    "IntegratorSettings",
    "ProtocolResult",
    "run_dfs_comparison",
    "run_preparation",
    "run_logic_flip",
    "run_stirap_vs_bstirap",
    "run_single_c13",
    "run_intuitive_baseline",
    "DEFAULT_INTUITIVE_DELAY",
]

_HALF = spin_half_operators()
_PAIR_IZ = (pair_operator(_HALF.iz, None), pair_operator(None, _HALF.iz))

#: pump->Stokes center delay (us) of the sequential baseline, fixed by a
#: coarse fidelity scan at the published widths and amplitude
DEFAULT_INTUITIVE_DELAY = 10.0


@dataclass(frozen=True)
class IntegratorSettings:
    rtol: float = 1e-8
    atol: float = 1e-10
    max_step: float = 0.1
    report_points: int = 500

    def kwargs(self) -> dict:
        return {
            "rtol": self.rtol,
            "atol": self.atol,
            "max_step": self.max_step,
            "report_points": self.report_points,
        }


@dataclass
class ProtocolResult:
    """Outcome of one protocol run.

    timing holds ramp/pulse/total durations in us (total = ramp + pulse);
    parameters_echo is the complete effective input record; flags carry
    non-fatal diagnostics such as adiabaticity violations.
    """

    name: str
    trajectory: Trajectory
    final_fidelity: float
    peak_intermediate_population: float
    timing: dict[str, float]
    parameters_echo: dict
    extras: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        ramp = self.timing.get("ramp_time", 0.0)
        pulse = self.timing.get("pulse_time", 0.0)
        total = self.timing.get("total_time", ramp + pulse)
        if abs(total - (ramp + pulse)) > 1e-9:
            raise ValueError("total_time must equal ramp_time + pulse_time")
        if not (-1e-12 <= self.final_fidelity <= 1.0 + 1e-12):
            raise ValueError("final fidelity outside [0, 1]")


def _cardinal_state(b0: np.ndarray, b1: np.ndarray, which: str) -> np.ndarray:
    states = {
        "x+": (b0 + b1) / np.sqrt(2.0),
        "x-": (b0 - b1) / np.sqrt(2.0),
        "y+": (b0 + 1j * b1) / np.sqrt(2.0),
        "y-": (b0 - 1j * b1) / np.sqrt(2.0),
        "z+": b0,
        "z-": b1,
    }
    if which not in states:
        raise ValueError(f"unknown Bloch state {which!r}")
    return states[which]


def _ms0_dissipators(cfg: RegisterConfig, spec: DissipatorSpec):
    """Nuclear dephasing channels on the m_s=0 pair manifold (NV inert)."""
    return build_dissipators(spec, sz_op=None, iz_ops=_PAIR_IZ[: cfg.n_carbons])


def _frame_dissipators(cfg: RegisterConfig, spec: DissipatorSpec, levels: LevelSystem, vdiag):
    return build_dissipators(
        spec, sz_op=levels.sz_eig, iz_ops=levels.iz_eig, frame_diag=vdiag
    )


# ---------------------------------------------------------------------------
# DFS robustness comparison
# ---------------------------------------------------------------------------


def run_dfs_comparison(
    cfg: RegisterConfig | None = None,
    bx: float = 5.0,
    bz: float = 70.0,
    duration: float = 100.0,
    initial_bloch: str = "x+",
    t2n_common: float = 500.0,
    integrator: IntegratorSettings | None = None,
) -> dict[str, ProtocolResult]:
    """Bloch-length decay of the register qubit vs a bare nuclear qubit.

    Four runs: {register, bare} x {independent, common} reservoirs, all
    starting from the same cardinal Bloch state of the respective qubit
    and evolving under the static m_s=0 Hamiltonian plus dephasing.  The
    register qubit is spanned by eigenstates 2 and 3, the bare qubit by
    |dd> and |uu>.

    The default fields are the storage configuration (weak transverse
    field): there the logical pair lies inside the zero-eigenvalue
    subspace of the collective Iz, so a common reservoir protects it
    outright.  At strong transverse fields (the gate configuration)
    state 3 mixes out of that subspace and the common-reservoir advantage
    over independent reservoirs inverts; both fields are exposed here.
    """
    cfg = cfg or RegisterConfig()
    intg = integrator or IntegratorSettings()
    eig = ms0_eigensystem((bx, bz), cfg.d12, cfg.constants.gamma_c)
    h = h_ms0((bx, bz), cfg)
    qubits = {
        "dfs": (eig.states[:, 1], eig.states[:, 2]),
        "bare": (
            np.array([1, 0, 0, 0], dtype=complex),
            np.array([0, 0, 0, 1], dtype=complex),
        ),
    }
    specs = {
        "independent": DissipatorSpec(
            mode="independent",
            t2e_star=cfg.t2e_star,
            t2n_star=tuple(c.t2n_star for c in cfg.carbons),
        ),
        "common": DissipatorSpec(
            mode="common", t2e_star=cfg.t2e_star, t2n_star=(t2n_common,)
        ),
    }
    results: dict[str, ProtocolResult] = {}
    for qname, (b0, b1) in qubits.items():
        for rname, spec in specs.items():
            psi0 = _cardinal_state(b0, b1, initial_bloch)
            rho0 = np.outer(psi0, psi0.conj())
            traj = integrate(
                rho0,
                h,
                _ms0_dissipators(cfg, spec),
                (0.0, duration),
                observables={
                    "bloch_length": lambda t, rho, b0=b0, b1=b1: bloch_length(rho, b0, b1)
                },
                **intg.kwargs(),
            )
            key = f"{qname}_{rname}"
            results[key] = ProtocolResult(
                name=f"dfs_comparison[{key}]",
                trajectory=traj,
                final_fidelity=float(traj.observables["bloch_length"][-1]),
                peak_intermediate_population=0.0,
                timing={"ramp_time": 0.0, "pulse_time": duration, "total_time": duration},
                parameters_echo={
                    "bx_G": bx,
                    "bz_G": bz,
                    "duration_us": duration,
                    "initial_bloch": initial_bloch,
                    "qubit": qname,
                    "reservoir": rname,
                    "t2n_common_us": t2n_common,
                    "integrator": intg.kwargs(),
                },
            )
    return results


# ---------------------------------------------------------------------------
# ramp stage shared by preparation and logic flip
# ---------------------------------------------------------------------------


def _run_ramp(
    cfg: RegisterConfig,
    schedule: FieldSchedule,
    rho0: np.ndarray,
    spec: DissipatorSpec,
    intg: IntegratorSettings,
    track_label: int | None,
) -> tuple[Trajectory, tuple[str, ...]]:
    """Integrate the undriven m_s=0 manifold along a field schedule.

    Observables: fidelity to the singlet, populations of the instantaneous
    eigenstates, mean m_s=0 energy, and (when ``track_label`` is given)
    overlap with that instantaneous eigenstate for the adiabaticity
    monitor.  Returns the trajectory and any raised flags.
    """
    gc = cfg.constants.gamma_c

    def h_of_t(t: float) -> np.ndarray:
        return h_ms0(schedule(t), cfg)

    def eig_at(t: float):
        return ms0_eigensystem(schedule(t), cfg.d12, gc)

    def pop_of(label: int):
        def fun(t, rho):
            v = eig_at(t).states[:, label]
            return float(np.real(v.conj() @ rho @ v))

        return fun

    observables = {
        "fidelity": lambda t, rho: float(
            np.real(eig_at(t).singlet.conj() @ rho @ eig_at(t).singlet)
        ),
        "pop_state1": pop_of(0),
        "pop_state2": pop_of(1),
        "pop_state3": pop_of(2),
        "pop_state4": pop_of(3),
        "pop_intermediate": lambda t, rho: 0.0,
        "pop_ms1": lambda t, rho: 0.0,
        "energy_ms0": lambda t, rho: mean_energy(rho, h_of_t(t)),
    }
    traj = integrate(
        rho0,
        h_of_t,
        _ms0_dissipators(cfg, spec),
        (schedule.t_start, schedule.t_end),
        breakpoints=schedule.breakpoints,
        observables=observables,
        **intg.kwargs(),
    )
    flags: tuple[str, ...] = ()
    if track_label is not None:
        overlap = traj.observables[f"pop_state{track_label + 1}"]
        if overlap.min() < 0.9:
            flags = (
                f"adiabaticity violated: eigenstate {track_label + 1} overlap "
                f"dropped to {overlap.min():.3f}",
            )
    return traj, flags


def _run_pulse_stage(
    cfg: RegisterConfig,
    levels: LevelSystem,
    frame,
    plan: PulsePlan,
    rho0_frame: np.ndarray,
    spec: DissipatorSpec,
    intg: IntegratorSettings,
    coupling_mode: str,
) -> Trajectory:
    """Integrate a driven stage in the rotating frame at frozen fields."""
    rot_h = rotating_h_tripartite if levels.dim == 8 else rotating_h_bipartite

    def h_of_t(t: float) -> np.ndarray:
        return rot_h(t, levels, plan, frame, coupling_mode)

    n0 = levels.n_ms0
    e_ms0 = levels.energies[:n0]
    observables = {
        "fidelity": lambda t, rho: float(np.real(rho[frame.stokes_level, frame.stokes_level])),
        "pop_intermediate": lambda t, rho: float(np.real(rho[frame.intermediate, frame.intermediate])),
        "pop_ms1": lambda t, rho: float(np.real(np.trace(rho[n0:, n0:]))),
        "energy_ms0": lambda t, rho: float(np.real(np.diag(rho)[:n0] @ e_ms0)),
    }
    for k in range(levels.dim):
        observables[f"pop_state{k + 1}"] = (
            lambda t, rho, k=k: float(np.real(rho[k, k]))
        )
    max_step = min(intg.max_step, min(p.sigma for p in plan.pulses) / 20.0)
    return integrate(
        rho0_frame,
        h_of_t,
        _frame_dissipators(cfg, spec, levels, frame.vdiag),
        (plan.t_start, plan.t_end),
        rtol=intg.rtol,
        atol=intg.atol,
        max_step=max_step,
        report_points=intg.report_points,
        observables=observables,
    )


def _stitch(stage_a: Trajectory, stage_b: Trajectory, offset: float) -> Trajectory:
    """Concatenate two stages on a common observable set (states dropped:
    the stages live in different representations)."""
    shifted = stage_b.shifted(offset)
    names = [n for n in stage_a.observables if n in shifted.observables]
    times = np.concatenate([stage_a.times, shifted.times])
    obs = {
        n: np.concatenate([stage_a.observables[n], shifted.observables[n]])
        for n in names
    }
    meta = {"stage_meta": [stage_a.meta, stage_b.meta]}
    return Trajectory(times=times, states=None, observables=obs, meta=meta)


# ---------------------------------------------------------------------------
# register preparation
# ---------------------------------------------------------------------------


def run_preparation(
    cfg: RegisterConfig | None = None,
    bx_start: float = 5.0,
    bz_start: float = 70.0,
    bx_end: float = 100.0,
    bz_end: float = 5.0,
    ramp_rate_bx: float = 7.0,
    ramp_rate_bz: float = 10.0,
    sigma: float = 5.0,
    omega0: float = mhz(0.5),
    t_delay: float | None = None,
    pulse_window: float = 30.0,
    dissipation: DissipatorSpec | None = None,
    ms1_mode: str = "simple",
    coupling_mode: str = "displayed",
    integrator: IntegratorSettings | None = None,
) -> ProtocolResult:
    """Prepare the register in the entangled zero-energy eigenstate.

    Starting from the bare |0, up, up> product at (bx_start, bz_start),
    ramp the transverse field up, then the axial field down (both linear,
    rates in G/us), and finally apply a Stokes-first pulse pair through
    the m_s=+1 intermediate at the frozen end-of-ramp fields.  Reports
    the fidelity to the singlet target and the stage timings.
    """
    cfg = cfg or RegisterConfig()
    intg = integrator or IntegratorSettings()
    spec = dissipation or DissipatorSpec(
        mode="independent",
        t2e_star=cfg.t2e_star,
        t2n_star=tuple(c.t2n_star for c in cfg.carbons),
    )
    t1 = abs(bx_end - bx_start) / ramp_rate_bx
    t2 = abs(bz_end - bz_start) / ramp_rate_bz
    schedule = FieldSchedule(
        (
            (0.0, t1, bx_start, bx_end, bz_start, bz_start),
            (t1, t1 + t2, bx_end, bx_end, bz_start, bz_end),
        )
    )
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[3, 3] = 1.0  # bare |up, up> product state
    ramp_traj, flags = _run_ramp(cfg, schedule, rho0, spec, intg, track_label=0)

    levels = build_tripartite_levels((bx_end, bz_end), cfg, ms1_mode=ms1_mode)
    frame = make_rotating_frame(levels, pump_level=0, stokes_level=1, intermediate=5)
    plan = make_stirap_plan(
        omega0, sigma, "stirap", (0.0, pulse_window), t_delay=t_delay, edge_fraction=None
    )
    s = levels.ms0.states
    rho_eig = s.conj().T @ ramp_traj.final_state @ s
    rho_frame = np.zeros((8, 8), dtype=complex)
    rho_frame[:4, :4] = rho_eig
    pulse_traj = _run_pulse_stage(
        cfg, levels, frame, plan, rho_frame, spec, intg, coupling_mode
    )

    traj = _stitch(ramp_traj, pulse_traj, offset=schedule.t_end)
    ramp_time = schedule.t_end
    result = ProtocolResult(
        name="preparation",
        trajectory=traj,
        final_fidelity=float(pulse_traj.observables["fidelity"][-1]),
        peak_intermediate_population=float(
            pulse_traj.observables["pop_intermediate"].max()
        ),
        timing={
            "ramp_time": ramp_time,
            "pulse_time": plan.duration,
            "total_time": ramp_time + plan.duration,
        },
        parameters_echo={
            "bx_start_G": bx_start,
            "bz_start_G": bz_start,
            "bx_end_G": bx_end,
            "bz_end_G": bz_end,
            "ramp_rate_bx_G_per_us": ramp_rate_bx,
            "ramp_rate_bz_G_per_us": ramp_rate_bz,
            "sigma_us": sigma,
            "omega0_rad_per_us": omega0,
            "t_delay_us": plan.pulse("pump").center - plan.pulse("stokes").center,
            "pulse_window_us": pulse_window,
            "dissipation": {"mode": spec.mode, "t2e_star_us": spec.t2e_star,
                            "t2n_star_us": list(spec.t2n_star)},
            "ms1_mode": ms1_mode,
            "coupling_mode": coupling_mode,
            "integrator": intg.kwargs(),
        },
        extras={
            "ramp_min_eigenstate_overlap": float(
                ramp_traj.observables["pop_state1"].min()
            ),
            "effective_pump_coupling_rad_per_us": float(
                abs(levels.chi[frame.intermediate, frame.pump_level]) * omega0 / 2.0
            ),
            "effective_stokes_coupling_rad_per_us": float(
                abs(levels.chi[frame.intermediate, frame.stokes_level]) * omega0 / 2.0
            ),
            "ramp_stage_states": ramp_traj,
            "pulse_stage_states": pulse_traj,
        },
        flags=flags,
    )
    return result


# ---------------------------------------------------------------------------
# logical spin flip
# ---------------------------------------------------------------------------


def run_logic_flip(
    cfg: RegisterConfig | None = None,
    direction: str = "zero_to_one",
    bx: float = 100.0,
    bz_start: float = 5.0,
    bz_pulse: float | None = None,
    ramp_rate_bz: float = 7.0,
    sigma: float = 5.0,
    omega0: float = mhz(1.0),
    t_delay: float | None = None,
    pulse_window: float = 30.0,
    pulse_order: str | None = None,
    dissipation: DissipatorSpec | None = None,
    ms1_mode: str = "simple",
    coupling_mode: str = "displayed",
    integrator: IntegratorSettings | None = None,
    include_ramp: bool = True,
) -> ProtocolResult:
    """Flip the logical qubit between register states 2 and 3.

    The axial field first ramps to the degeneracy point (where the two
    logic states share zero energy), then a pulse pair drives the
    transfer through the m_s=+1 intermediate.  ``zero_to_one`` starts in
    the singlet with the Stokes tone first; ``one_to_zero`` starts in
    state 3 with the order interchanged, which again realizes the
    dark-state passage in the opposite direction.  ``pulse_order``
    overrides the direction-derived ordering (used by the path
    discrimination experiment, which keeps the order fixed).
    """
    if direction not in ("zero_to_one", "one_to_zero"):
        raise ValueError(f"unknown direction {direction!r}")
    cfg = cfg or RegisterConfig()
    intg = integrator or IntegratorSettings()
    spec = dissipation or DissipatorSpec(
        mode="independent",
        t2e_star=cfg.t2e_star,
        t2n_star=tuple(c.t2n_star for c in cfg.carbons),
    )
    if bz_pulse is None:
        bz_pulse = singlet_degeneracy_bz(bx, cfg.d12, cfg.constants.gamma_c)

    start_label = 1 if direction == "zero_to_one" else 2
    target_label = 2 if direction == "zero_to_one" else 1

    flags: tuple[str, ...] = ()
    if include_ramp and abs(bz_pulse - bz_start) > 1e-9:
        t_ramp = abs(bz_pulse - bz_start) / ramp_rate_bz
        schedule = FieldSchedule.linear(bx, bx, bz_start, bz_pulse, 0.0, t_ramp)
        eig0 = ms0_eigensystem((bx, bz_start), cfg.d12, cfg.constants.gamma_c)
        psi0 = eig0.states[:, start_label]
        rho0 = np.outer(psi0, psi0.conj())
        ramp_traj, flags = _run_ramp(
            cfg, schedule, rho0, spec, intg, track_label=start_label
        )
        rho_bare = ramp_traj.final_state
        ramp_time = t_ramp
    else:
        ramp_traj = None
        eigp = ms0_eigensystem((bx, bz_pulse), cfg.d12, cfg.constants.gamma_c)
        psi0 = eigp.states[:, start_label]
        rho_bare = np.outer(psi0, psi0.conj())
        ramp_time = 0.0

    levels = build_tripartite_levels((bx, bz_pulse), cfg, ms1_mode=ms1_mode)
    # carriers fixed to the logical transitions: pump on state 2, Stokes on 3
    frame = make_rotating_frame(levels, pump_level=1, stokes_level=2, intermediate=5)
    order = pulse_order or ("stirap" if direction == "zero_to_one" else "b_stirap")
    plan = make_stirap_plan(
        omega0, sigma, order, (0.0, pulse_window), t_delay=t_delay, edge_fraction=None
    )
    s = levels.ms0.states
    rho_frame = np.zeros((8, 8), dtype=complex)
    rho_frame[:4, :4] = s.conj().T @ rho_bare @ s
    pulse_traj = _run_pulse_stage(
        cfg, levels, frame, plan, rho_frame, spec, intg, coupling_mode
    )
    final_fidelity = float(pulse_traj.observables[f"pop_state{target_label + 1}"][-1])

    traj = (
        _stitch(ramp_traj, pulse_traj, offset=ramp_time) if ramp_traj else pulse_traj
    )
    dt = pulse_traj.times[1] - pulse_traj.times[0]
    return ProtocolResult(
        name=f"logic_flip[{direction}]",
        trajectory=traj,
        final_fidelity=final_fidelity,
        peak_intermediate_population=float(
            pulse_traj.observables["pop_intermediate"].max()
        ),
        timing={
            "ramp_time": ramp_time,
            "pulse_time": plan.duration,
            "total_time": ramp_time + plan.duration,
        },
        parameters_echo={
            "direction": direction,
            "bx_G": bx,
            "bz_start_G": bz_start,
            "bz_pulse_G": bz_pulse,
            "ramp_rate_bz_G_per_us": ramp_rate_bz,
            "sigma_us": sigma,
            "omega0_rad_per_us": omega0,
            "pulse_window_us": pulse_window,
            "pulse_order": order,
            "dissipation": {"mode": spec.mode, "t2e_star_us": spec.t2e_star,
                            "t2n_star_us": list(spec.t2n_star)},
            "ms1_mode": ms1_mode,
            "coupling_mode": coupling_mode,
            "include_ramp": include_ramp,
            "integrator": intg.kwargs(),
        },
        extras={
            "peak_ms1_population": float(pulse_traj.observables["pop_ms1"].max()),
            "integrated_ms1_population": float(
                pulse_traj.observables["pop_ms1"].sum() * dt
            ),
            "logic_gap": float(abs(levels.energies[2] - levels.energies[1])),
            "ramp_stage_states": ramp_traj,
            "pulse_stage_states": pulse_traj,
        },
        flags=flags,
    )


def run_stirap_vs_bstirap(
    cfg: RegisterConfig | None = None,
    **kwargs,
) -> tuple[ProtocolResult, ProtocolResult]:
    """Discriminate pulse-order paths with a fixed Stokes-first sequence.

    Both runs use identical plans (Stokes tone first); only the initially
    occupied register state varies.  Starting in the singlet the first
    pulse addresses the empty transition (dark-state path); starting in
    state 3 it addresses the occupied one (reversed passage), transiently
    exciting the m_s=+1 manifold.  Returns (dark-state run, reversed run).
    """
    cfg = cfg or RegisterConfig()
    dark = run_logic_flip(cfg, direction="zero_to_one", pulse_order="stirap", **kwargs)
    bright = run_logic_flip(cfg, direction="one_to_zero", pulse_order="stirap", **kwargs)
    return dark, bright


# ---------------------------------------------------------------------------
# single-carbon control
# ---------------------------------------------------------------------------


def run_single_c13(
    cfg: RegisterConfig | None = None,
    bx: float = 100.0,
    bz: float = 10.0,
    sigma: float = 9.0,
    omega0: float = mhz(0.5),
    t_delay: float | None = None,
    pulse_window: float = 30.0,
    dissipation: DissipatorSpec | None = None,
    coupling_mode: str = "displayed",
    integrator: IntegratorSettings | None = None,
) -> ProtocolResult:
    """Flip a single nuclear spin through the m_s=+1 manifold.

    The off-axis field mixes the m_s=0 nuclear eigenstates (mixing angle
    theta), opening the otherwise forbidden nuclear-flip legs of the
    Lambda system.  Resonant Stokes-first transfer from level 1 to level
    2; level 4 stays essentially dark throughout.
    """
    from .hamiltonians import single_carbon_config

    cfg = cfg or single_carbon_config()
    if cfg.n_carbons != 1:
        raise ValueError("run_single_c13 requires a single-carbon config")
    intg = integrator or IntegratorSettings()
    spec = dissipation or DissipatorSpec(
        mode="independent",
        t2e_star=cfg.t2e_star,
        t2n_star=(cfg.carbons[0].t2n_star,),
    )
    levels = build_bipartite_levels((bx, bz), cfg)
    frame = make_rotating_frame(levels, pump_level=0, stokes_level=1, intermediate=2)
    plan = make_stirap_plan(
        omega0, sigma, "stirap", (0.0, pulse_window), t_delay=t_delay, edge_fraction=None
    )
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[0, 0] = 1.0
    pulse_traj = _run_pulse_stage(
        cfg, levels, frame, plan, rho0, spec, intg, coupling_mode
    )
    return ProtocolResult(
        name="single_c13",
        trajectory=pulse_traj,
        final_fidelity=float(pulse_traj.observables["fidelity"][-1]),
        peak_intermediate_population=float(
            pulse_traj.observables["pop_intermediate"].max()
        ),
        timing={
            "ramp_time": 0.0,
            "pulse_time": plan.duration,
            "total_time": plan.duration,
        },
        parameters_echo={
            "bx_G": bx,
            "bz_G": bz,
            "sigma_us": sigma,
            "omega0_rad_per_us": omega0,
            "pulse_window_us": pulse_window,
            "a_zz_rad_per_us": cfg.carbons[0].a_zz,
            "dissipation": {"mode": spec.mode, "t2e_star_us": spec.t2e_star,
                            "t2n_star_us": list(spec.t2n_star)},
            "coupling_mode": coupling_mode,
            "integrator": intg.kwargs(),
        },
        extras={
            "mixing_theta_rad": levels.bipartite.mixing_theta,
            "peak_level4_population": float(
                pulse_traj.observables["pop_state4"].max()
            ),
            "pulse_stage_states": pulse_traj,
        },
    )


# ---------------------------------------------------------------------------
# sequential (intuitive) baseline
# ---------------------------------------------------------------------------


def run_intuitive_baseline(
    cfg: RegisterConfig | None = None,
    bx: float = 100.0,
    bz: float | None = None,
    sigma_p: float = 5.5,
    sigma_s: float = 2.8,
    omega0: float = mhz(0.1),
    t_delay: float = DEFAULT_INTUITIVE_DELAY,
    pulse_window: float = 30.0,
    dissipation: DissipatorSpec | None = None,
    ms1_mode: str = "simple",
    coupling_mode: str = "displayed",
    integrator: IntegratorSettings | None = None,
) -> ProtocolResult:
    """Sequential pump-then-Stokes transfer into the singlet.

    Two pi-like pulses move population from level 1 to the m_s=+1
    intermediate and on to the singlet.  The intermediate is fully
    occupied between the pulses, so the electron dephasing time caps the
    achievable fidelity; this is the baseline the adiabatic passage
    protocols are measured against.  ``bz`` defaults to the degeneracy
    field at ``bx``.
    """
    cfg = cfg or RegisterConfig()
    intg = integrator or IntegratorSettings()
    spec = dissipation or DissipatorSpec(
        mode="independent",
        t2e_star=cfg.t2e_star,
        t2n_star=tuple(c.t2n_star for c in cfg.carbons),
    )
    if bz is None:
        bz = singlet_degeneracy_bz(bx, cfg.d12, cfg.constants.gamma_c)
    levels = build_tripartite_levels((bx, bz), cfg, ms1_mode=ms1_mode)
    frame = make_rotating_frame(levels, pump_level=0, stokes_level=1, intermediate=5)
    plan = make_intuitive_plan(
        omega0, sigma_p, sigma_s, (0.0, pulse_window), t_delay, edge_fraction=None
    )
    rho0 = np.zeros((8, 8), dtype=complex)
    rho0[0, 0] = 1.0  # eigenstate 1 at the operating fields
    pulse_traj = _run_pulse_stage(
        cfg, levels, frame, plan, rho0, spec, intg, coupling_mode
    )
    return ProtocolResult(
        name="intuitive_baseline",
        trajectory=pulse_traj,
        final_fidelity=float(pulse_traj.observables["fidelity"][-1]),
        peak_intermediate_population=float(
            pulse_traj.observables["pop_intermediate"].max()
        ),
        timing={
            "ramp_time": 0.0,
            "pulse_time": plan.duration,
            "total_time": plan.duration,
        },
        parameters_echo={
            "bx_G": bx,
            "bz_G": bz,
            "sigma_p_us": sigma_p,
            "sigma_s_us": sigma_s,
            "omega0_rad_per_us": omega0,
            "t_delay_us": t_delay,
            "pulse_window_us": pulse_window,
            "dissipation": {"mode": spec.mode, "t2e_star_us": spec.t2e_star,
                            "t2n_star_us": list(spec.t2n_star)},
            "ms1_mode": ms1_mode,
            "coupling_mode": coupling_mode,
            "integrator": intg.kwargs(),
        },
        extras={"pulse_stage_states": pulse_traj},
    )
