"""Physical parameters and Hamiltonian builders for the NV-carbon register.

The register is an NV- electron spin (S=1) hyperfine-coupled to one or two
13C nuclear spins (I=1/2).  Builders cover:

* the full tripartite Hamiltonian (NV + 2 carbons, 12 levels),
* the nuclear-pair manifolds conditioned on the electron projection
  (4 levels each, for m_s=0 and m_s=+1),
* the bipartite NV + single-carbon system (6 levels),
* restriction of a full-space operator onto electron-spin manifolds.

Unit conventions: hbar = 1, energies/couplings are angular frequencies in
rad/us, magnetic fields in Gauss, times in us, distances in nm.  Quantities
conventionally quoted as plain frequencies (MHz, kHz) pick up a factor of
2*pi on ingestion; the helpers below make that explicit at call sites.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    assert_hermitian,
    pair_operator,
    spin1_operators,
    spin_half_operators,
)

__all__ = [
    "TWO_PI",
    "mhz",
    "khz",
    "PhysicalConstants",
    "CarbonParams",
    "RegisterConfig",
    "FieldSchedule",
    "dipolar_coupling",
    "h_full_tripartite",
    "h_ms0",
    "h_ms1_simple",
    "h_ms1_full",
    "h_bipartite",
    "manifold_restrict",
    "manifold_indices",
]

TWO_PI = 2.0 * np.pi


def mhz(value: float) -> float:
    """Convert a frequency quoted in MHz to rad/us."""
    return TWO_PI * value


def khz(value: float) -> float:
    """Convert a frequency quoted in kHz to rad/us."""
    return TWO_PI * 1e-3 * value


@dataclass(frozen=True)
class PhysicalConstants:
    """Fixed constants of the electron-nuclear system.

    d:              zero-field splitting, rad/us (default 2*pi*2870 MHz)
    gamma_e:        electron gyromagnetic ratio, rad/us per Gauss
    gamma_c:        13C gyromagnetic ratio, rad/us per Gauss
    mu0_prefactor:  dipolar prefactor so the nuclear-nuclear coupling is
                    mu0_prefactor * gamma_c**2 / r**3 (r in nm) in rad/us
    """

    d: float = mhz(2870.0)
    gamma_e: float = mhz(2.8)
    gamma_c: float = khz(1.07)
    mu0_prefactor: float = 1.054571817

    def __post_init__(self):
        for name in ("d", "gamma_e", "gamma_c", "mu0_prefactor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"PhysicalConstants.{name} must be positive")


@dataclass(frozen=True)
class CarbonParams:
    """Hyperfine and relaxation parameters of one 13C nuclear spin.

    a_zz:     secular hyperfine component, rad/us
    a_ani:    anisotropic hyperfine magnitude, rad/us (>= 0)
    phi:      azimuthal phase of the anisotropic component, rad
    t2n_star: transverse relaxation time, us
    """

    a_zz: float
    a_ani: float = 0.0
    phi: float = 0.0
    t2n_star: float = 500.0

    def __post_init__(self):
        if self.t2n_star <= 0:
            raise ValueError("CarbonParams.t2n_star must be positive")
        if self.a_ani < 0:
            raise ValueError("CarbonParams.a_ani must be nonnegative")


def _default_carbons() -> tuple[CarbonParams, ...]:
    return (
        CarbonParams(a_zz=mhz(12.45), a_ani=mhz(1.16), phi=0.0, t2n_star=500.0),
        CarbonParams(a_zz=mhz(2.28), a_ani=mhz(0.24), phi=0.0, t2n_star=700.0),
    )


@dataclass(frozen=True)
class RegisterConfig:
    """Register composition: constants, carbons, couplings, NV dephasing.

    d12 is the nuclear-nuclear dipolar coupling in rad/us (taken as an
    input rather than derived from a geometry; single-carbon registers
    ignore it).  t2e_star is the NV transverse relaxation time in us.
    """

    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    carbons: tuple[CarbonParams, ...] = field(default_factory=_default_carbons)
    d12: float = khz(4.0)
    t2e_star: float = 7.0

    def __post_init__(self):
        if len(self.carbons) not in (1, 2):
            raise ValueError("RegisterConfig supports one or two carbons")
        if self.d12 < 0:
            raise ValueError("RegisterConfig.d12 must be nonnegative")
        if self.t2e_star <= 0:
            raise ValueError("RegisterConfig.t2e_star must be positive")
        object.__setattr__(self, "carbons", tuple(self.carbons))

    @property
    def n_carbons(self) -> int:
        return len(self.carbons)

    def replace(self, **kwargs) -> "RegisterConfig":
        return dataclasses.replace(self, **kwargs)


def single_carbon_config(
    a_zz: float = mhz(1.07),
    t2n_star: float = 500.0,
    t2e_star: float = 7.0,
    constants: PhysicalConstants | None = None,
) -> RegisterConfig:
    """Convenience builder for the NV + one-carbon register."""
    return RegisterConfig(
        constants=constants or PhysicalConstants(),
        carbons=(CarbonParams(a_zz=a_zz, a_ani=0.0, phi=0.0, t2n_star=t2n_star),),
        d12=0.0,
        t2e_star=t2e_star,
    )


@dataclass(frozen=True)
class FieldSchedule:
    """Piecewise-linear magnetic field trajectory (Bx(t), Bz(t)).

    ``segments`` is an ordered tuple of
    ``(t_start, t_end, bx_start, bx_end, bz_start, bz_end)`` rows with
    times in us and fields in Gauss.  Segments must be contiguous and the
    field continuous across boundaries; evaluation is linear inside a
    segment and clamps to the first/last value outside the covered span.
    """

    segments: tuple[tuple[float, float, float, float, float, float], ...]

    def __post_init__(self):
        segs = tuple(tuple(float(x) for x in s) for s in self.segments)
        if not segs:
            raise ValueError("FieldSchedule needs at least one segment")
        for s in segs:
            if s[1] <= s[0]:
                raise ValueError(f"segment {s} has nonpositive duration")
        for a, b in zip(segs, segs[1:]):
            if abs(b[0] - a[1]) > 1e-9:
                raise ValueError("segments must be contiguous in time")
            if abs(b[2] - a[3]) > 1e-9 or abs(b[4] - a[5]) > 1e-9:
                raise ValueError("field must be continuous across segment boundaries")
        object.__setattr__(self, "segments", segs)

    @property
    def t_start(self) -> float:
        return self.segments[0][0]

    @property
    def t_end(self) -> float:
        return self.segments[-1][1]

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Interior times where the field trajectory has a kink."""
        return tuple(s[1] for s in self.segments[:-1])

    def __call__(self, t: float) -> tuple[float, float]:
        segs = self.segments
        if t <= segs[0][0]:
            return segs[0][2], segs[0][4]
        if t >= segs[-1][1]:
            return segs[-1][3], segs[-1][5]
        for t0, t1, bx0, bx1, bz0, bz1 in segs:
            if t0 <= t <= t1:
                f = (t - t0) / (t1 - t0)
                return bx0 + f * (bx1 - bx0), bz0 + f * (bz1 - bz0)
        raise AssertionError("unreachable: contiguous segments cover the span")

    @staticmethod
    def hold(bx: float, bz: float, t_start: float, t_end: float) -> "FieldSchedule":
        return FieldSchedule(((t_start, t_end, bx, bx, bz, bz),))

    @staticmethod
    def linear(
        bx0: float, bx1: float, bz0: float, bz1: float, t_start: float, t_end: float
    ) -> "FieldSchedule":
        return FieldSchedule(((t_start, t_end, bx0, bx1, bz0, bz1),))


def dipolar_coupling(r12_nm: float, constants: PhysicalConstants | None = None) -> float:
    """Nuclear-nuclear dipolar prefactor mu0*gamma_c^2/(4 pi r^3) in rad/us.

    ``r12_nm`` is the internuclear distance in nm; nonpositive distances
    are rejected.
    """
    if r12_nm <= 0:
        raise ValueError("internuclear distance must be positive")
    c = constants or PhysicalConstants()
    return c.mu0_prefactor * c.gamma_c**2 / r12_nm**3


# ---------------------------------------------------------------------------
# nuclear-pair manifold Hamiltonians (4x4, basis {dd, du, ud, uu})
# ---------------------------------------------------------------------------

_HALF = spin_half_operators()

_IZ1 = pair_operator(_HALF.iz, None)
_IZ2 = pair_operator(None, _HALF.iz)
_IX1 = pair_operator(_HALF.ix, None)
_IX2 = pair_operator(None, _HALF.ix)
_IP1 = pair_operator(_HALF.iplus, None)
_IP2 = pair_operator(None, _HALF.iplus)
_IM1 = pair_operator(_HALF.iminus, None)
_IM2 = pair_operator(None, _HALF.iminus)
_FLIPFLOP = _IP1 @ _IM2 + _IM1 @ _IP2
_IZIZ = _IZ1 @ _IZ2
_EYE4 = np.eye(4, dtype=complex)


def nuclear_pair_dipolar(d12: float) -> np.ndarray:
    """Secular dipolar coupling (d12/2) * (flip-flop - 4 Iz Iz) of the pair."""
    return 0.5 * d12 * (_FLIPFLOP - 4.0 * _IZIZ)


def h_ms0(b: tuple[float, float], cfg: RegisterConfig) -> np.ndarray:
    """Nuclear-pair Hamiltonian conditioned on m_s = 0.

    Returns the 4x4 matrix on the basis {dd, du, ud, uu}: nuclear Zeeman
    terms for both carbons plus the secular dipolar coupling.  Requires a
    two-carbon config.
    """
    _require_two_carbons(cfg)
    bx, bz = b
    gc = cfg.constants.gamma_c
    h = gc * bz * (_IZ1 + _IZ2) + gc * bx * (_IX1 + _IX2)
    h = h + nuclear_pair_dipolar(cfg.d12)
    return h


def h_ms1_simple(b: tuple[float, float], cfg: RegisterConfig) -> np.ndarray:
    """Nuclear-pair Hamiltonian conditioned on m_s = +1, secular limit.

    Diagonal on the bare pair basis: constant offset D + gamma_e*Bz plus
    the two secular hyperfine shifts.  Nuclear Zeeman and anisotropic
    terms are dropped (valid for A_zz much larger than gamma_c*B).
    """
    _require_two_carbons(cfg)
    _, bz = b
    c = cfg.constants
    offset = c.d + c.gamma_e * bz
    a1, a2 = cfg.carbons[0].a_zz, cfg.carbons[1].a_zz
    return offset * _EYE4 + a1 * _IZ1 + a2 * _IZ2


def h_ms1_full(b: tuple[float, float], cfg: RegisterConfig) -> np.ndarray:
    """Nuclear-pair Hamiltonian conditioned on m_s = +1, no secular dropping.

    Keeps nuclear Zeeman and the anisotropic hyperfine components with
    their azimuthal phases:

        w_e + w_1z Iz1 + w_2z Iz2
            + (w_1x I+1 + conj(w_1x) I-1) + (w_2x I+2 + conj(w_2x) I-2)

    with w_e = D + gamma_e*Bz, w_iz = gamma_c*Bz + A_zz_i and
    w_ix = (gamma_c*Bx + A_ani_i * exp(-i*phi_i)) / 2.
    """
    _require_two_carbons(cfg)
    bx, bz = b
    c = cfg.constants
    c1, c2 = cfg.carbons
    w_e = c.d + c.gamma_e * bz
    w1z = c.gamma_c * bz + c1.a_zz
    w2z = c.gamma_c * bz + c2.a_zz
    w1x = 0.5 * (c.gamma_c * bx + c1.a_ani * np.exp(-1j * c1.phi))
    w2x = 0.5 * (c.gamma_c * bx + c2.a_ani * np.exp(-1j * c2.phi))
    h = w_e * _EYE4 + w1z * _IZ1 + w2z * _IZ2
    h = h + w1x * _IP1 + np.conj(w1x) * _IM1
    h = h + w2x * _IP2 + np.conj(w2x) * _IM2
    return h


# ---------------------------------------------------------------------------
# full composite Hamiltonians
# ---------------------------------------------------------------------------


def h_full_tripartite(b: tuple[float, float], cfg: RegisterConfig) -> np.ndarray:
    """Full NV + two-carbon Hamiltonian on the 12-dim composite space.

    Composite basis is lexicographic over NV {+1, 0, -1} and the nuclear
    pair {dd, du, ud, uu}, so each electron manifold occupies a contiguous
    4x4 block.  Contains the zero-field splitting, electron and nuclear
    Zeeman terms (including the transverse Bx Sx term), the secular plus
    anisotropic hyperfine couplings, and the nuclear dipolar interaction
    with the internuclear axis along z.
    """
    _require_two_carbons(cfg)
    bx, bz = b
    c = cfg.constants
    s1 = spin1_operators()

    def nv(op):
        return np.kron(op, _EYE4)

    def pair(op):
        return np.kron(np.eye(3, dtype=complex), op)

    h = c.d * nv(s1.sz @ s1.sz)
    h = h + c.gamma_e * (bz * nv(s1.sz) + bx * nv(s1.sx))
    h = h + c.gamma_c * (bz * pair(_IZ1 + _IZ2) + bx * pair(_IX1 + _IX2))
    for carbon, iz, ip, im in ((cfg.carbons[0], _IZ1, _IP1, _IM1),
                               (cfg.carbons[1], _IZ2, _IP2, _IM2)):
        h = h + carbon.a_zz * nv(s1.sz) @ pair(iz)
        if carbon.a_ani != 0.0:
            wx = 0.5 * carbon.a_ani * np.exp(-1j * carbon.phi)
            h = h + nv(s1.sz) @ (wx * pair(ip) + np.conj(wx) * pair(im))
    h = h + pair(nuclear_pair_dipolar(cfg.d12))
    assert_hermitian(h, name="tripartite Hamiltonian")
    return h


def h_bipartite(b: tuple[float, float], cfg: RegisterConfig) -> np.ndarray:
    """NV + single-carbon Hamiltonian on the 6-dim composite space.

    Basis lexicographic over NV {+1, 0, -1} and nucleus {up, down}.  The
    transverse nuclear Zeeman term (gamma_c*Bx/2)(I+ + I-) is kept in all
    electron manifolds.
    """
    if cfg.n_carbons != 1:
        raise ValueError("h_bipartite requires a single-carbon config")
    bx, bz = b
    c = cfg.constants
    s1 = spin1_operators()
    half = _HALF
    eye2 = np.eye(2, dtype=complex)

    def nv(op):
        return np.kron(op, eye2)

    def nuc(op):
        return np.kron(np.eye(3, dtype=complex), op)

    h = c.d * nv(s1.sz @ s1.sz) + c.gamma_e * bz * nv(s1.sz)
    h = h + c.gamma_c * bz * nuc(half.iz)
    h = h + 0.5 * c.gamma_c * bx * nuc(half.iplus + half.iminus)
    h = h + cfg.carbons[0].a_zz * nv(s1.sz) @ nuc(half.iz)
    assert_hermitian(h, name="bipartite Hamiltonian")
    return h


# ---------------------------------------------------------------------------
# manifold restriction
# ---------------------------------------------------------------------------

_MANIFOLD_BLOCKS = {"ms_plus1": (0,), "ms0": (1,), "both": (0, 1)}


def manifold_indices(dim: int, manifold: str) -> np.ndarray:
    """Composite-space indices retained by a manifold restriction.

    ``dim`` must be divisible by 3 (NV blocks of equal size in the order
    {+1, 0, -1}); ``manifold`` is one of ``ms0``, ``ms_plus1``, ``both``.
    """
    if manifold not in _MANIFOLD_BLOCKS:
        raise ValueError(f"unknown manifold tag {manifold!r}")
    if dim % 3 != 0:
        raise ValueError(f"dimension {dim} is not an NV composite space")
    block = dim // 3
    idx = []
    for b in _MANIFOLD_BLOCKS[manifold]:
        idx.extend(range(b * block, (b + 1) * block))
    return np.array(idx, dtype=int)


def manifold_restrict(h: np.ndarray, manifold: str) -> tuple[np.ndarray, np.ndarray]:
    """Principal submatrix of ``h`` on the retained electron manifold(s).

    Returns ``(restricted, indices)`` where ``indices`` maps rows of the
    restricted operator back to the composite basis.
    """
    h = np.asarray(h, dtype=complex)
    idx = manifold_indices(h.shape[0], manifold)
    return h[np.ix_(idx, idx)], idx


def _require_two_carbons(cfg: RegisterConfig) -> None:
    if cfg.n_carbons != 2:
        raise ValueError("this Hamiltonian requires a two-carbon config")
