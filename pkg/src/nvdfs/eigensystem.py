"""Closed-form and numerical eigensystems of the register Hamiltonians.

The two-carbon m_s=0 manifold has an exact trigonometric solution: the
field-independent nuclear singlet sits at zero energy, and the symmetric
triplet sector reduces to a depressed cubic solved by the cosine triple
root formula.  State labels follow the root formulas, not energy sorting,
so they track continuously through level crossings along field ramps.

The NV + single-carbon system has a 2x2 mixing-angle solution in m_s=0;
its m_s=+-1 eigenstates are taken as bare product states (the transverse
nuclear Zeeman term is negligible against the hyperfine splitting there,
and the discrepancy is measured against the numerical solver rather than
hidden).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .hamiltonians import RegisterConfig
from .operators import fix_global_phase, is_hermitian

__all__ = [
    "SINGLET",
    "Ms0Eigensystem",
    "BipartiteEigensystem",
    "ms0_eigensystem",
    "singlet_degeneracy_bz",
    "bipartite_eigensystem",
    "numerical_eig",
    "label_states",
    "LabelingResult",
]

#: nuclear singlet (|du> - |ud>)/sqrt(2) on the pair basis {dd, du, ud, uu}
SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)

# symmetric-sector coordinates: {dd, (du+ud)/sqrt(2), uu}
_SYM_BASIS = np.array(
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0 / np.sqrt(2.0), 0.0],
        [0.0, 1.0 / np.sqrt(2.0), 0.0],
        [0.0, 0.0, 1.0],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class Ms0Eigensystem:
    """Analytic eigensystem of the two-carbon m_s=0 manifold.

    energies: (4,) in label order 1..4; the singlet label 2 is exactly 0.
    states:   (4, 4) complex, column i is state i+1 on {dd, du, ud, uu}.
    alpha/beta/xi/norm_d: coefficient arrays for labels (1, 3, 4).
    q, r, theta_cubic:    invariants of the cubic root solution.
    fallback: bool flags for labels (1, 3, 4) where the coefficient
              formulas degenerate (0/0) and a direct construction is used.
    """

    bx: float
    bz: float
    d12: float
    energies: np.ndarray
    states: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    xi: np.ndarray
    norm_d: np.ndarray
    q: float
    r: float
    theta_cubic: float
    fallback: tuple[bool, bool, bool]

    @property
    def singlet(self) -> np.ndarray:
        return self.states[:, 1]


def _cubic_energies(b2x: float, b2z: float, d12: float) -> tuple[np.ndarray, float, float, float]:
    """Three symmetric-sector roots via the cosine method.

    ``b2x``/``b2z`` are (gamma_c*Bx)^2 and (gamma_c*Bz)^2.  Returns the
    roots in label order (1, 3, 4) plus (Q, R, theta).
    """
    q = (3.0 * d12**2 + 4.0 * (b2x + b2z)) / 12.0
    r = (d12**3 + 2.0 * d12 * (b2x - 2.0 * b2z)) / 8.0
    if q <= 0.0:
        raise ValueError("fully degenerate m_s=0 manifold (no fields, no coupling)")
    ratio = r / q**1.5
    if abs(ratio) > 1.0 + 1e-12:
        raise ValueError(f"cubic invariant |R/Q^(3/2)| = {abs(ratio)} exceeds 1")
    theta = float(np.arccos(np.clip(ratio, -1.0, 1.0)))
    amp = 2.0 * np.sqrt(q)
    e1 = amp * np.cos(theta / 3.0)
    e3 = amp * np.cos((theta + 4.0 * np.pi) / 3.0)
    e4 = amp * np.cos((theta + 2.0 * np.pi) / 3.0)
    return np.array([e1, e3, e4]), q, r, theta


def ms0_eigensystem(b: tuple[float, float], d12: float, gamma_c: float | None = None) -> Ms0Eigensystem:
    """Exact eigensystem of the m_s=0 nuclear-pair Hamiltonian.

    ``b`` is (Bx, Bz) in Gauss and ``d12`` the dipolar coupling in rad/us;
    ``gamma_c`` defaults to the 13C value from :class:`PhysicalConstants`.

    The sign gauge makes the symmetric-triplet coefficient xi nonnegative;
    when a state has (numerically) no symmetric-triplet weight the gauge
    falls back to the largest-component rule.
    """
    from .hamiltonians import PhysicalConstants

    gc = PhysicalConstants().gamma_c if gamma_c is None else gamma_c
    bx, bz = float(b[0]), float(b[1])
    gbx, gbz = gc * bx, gc * bz

    roots, q, r, theta = _cubic_energies(gbx**2, gbz**2, d12)
    energies = np.array([roots[0], 0.0, roots[1], roots[2]])

    scale = max(abs(d12), 2.0 * np.hypot(gbx, gbz), 2.0 * np.abs(roots).max())
    alpha = np.zeros(3)
    beta = np.zeros(3)
    xi = np.zeros(3)
    norm_d = np.zeros(3)
    states = np.zeros((4, 4), dtype=complex)
    states[:, 1] = SINGLET
    fallback = [False, False, False]

    # The coefficient formulas lose roughly eps * scale^2 / sqrt(d_k)
    # digits; below this d_k floor the direct 3x3 construction is exact
    # while the formulas are noise-dominated.
    hard = [k for k in range(3) if _coefficient_norm(roots[k], d12, gbx, gbz) <= 1e-9 * scale**4]
    sym_vecs = _symmetric_sector_vectors(roots, hard, d12, gbx, gbz) if hard else None

    for k, (label, energy) in enumerate(zip((0, 2, 3), roots)):
        u = d12 + 2.0 * energy
        dk = _coefficient_norm(energy, d12, gbx, gbz)
        norm_d[k] = dk
        if k in hard:
            fallback[k] = True
            coeffs = sym_vecs[:, hard.index(k)]
        else:
            sq = np.sqrt(dk)
            a = -2.0 * gbx * u / sq
            bb = 4.0 * gbx * gbz / sq
            x = (4.0 * gbz**2 - u**2) / sq
            coeffs = np.array([(a + bb) / np.sqrt(2.0), x, (a - bb) / np.sqrt(2.0)])
        coeffs = _gauge_symmetric(coeffs)
        alpha[k] = (coeffs[0] + coeffs[2]) / np.sqrt(2.0)
        beta[k] = (coeffs[0] - coeffs[2]) / np.sqrt(2.0)
        xi[k] = coeffs[1]
        states[:, label] = _SYM_BASIS @ coeffs

    return Ms0Eigensystem(
        bx=bx,
        bz=bz,
        d12=d12,
        energies=energies,
        states=states,
        alpha=alpha,
        beta=beta,
        xi=xi,
        norm_d=norm_d,
        q=q,
        r=r,
        theta_cubic=theta,
        fallback=tuple(fallback),
    )


def _coefficient_norm(energy: float, d12: float, gbx: float, gbz: float) -> float:
    """Squared norm d_i of the unnormalized coefficient triple."""
    u = d12 + 2.0 * energy
    return (
        u**4
        + 4.0 * (gbx**2 - 2.0 * gbz**2) * u**2
        + 16.0 * gbz**2 * (gbx**2 + gbz**2)
    )


def _symmetric_matrix(d12: float, gbx: float, gbz: float) -> np.ndarray:
    """Hamiltonian on the symmetric sector {dd, (du+ud)/sqrt2, uu}."""
    s = gbx / np.sqrt(2.0)
    return np.array(
        [
            [-gbz - d12 / 2.0, s, 0.0],
            [s, d12, s],
            [0.0, s, gbz - d12 / 2.0],
        ]
    )


def _symmetric_sector_vectors(roots, hard, d12, gbx, gbz) -> np.ndarray:
    """Direct eigenvectors for labels whose coefficient formulas are 0/0.

    Diagonalizes the 3x3 symmetric-sector matrix and assigns one numeric
    eigenvector per requested root by closest eigenvalue, never reusing a
    column (keeps degenerate pairs orthonormal).
    """
    w, v = np.linalg.eigh(_symmetric_matrix(d12, gbx, gbz))
    taken: list[int] = []
    cols = []
    for k in hard:
        order = np.argsort(np.abs(w - roots[k]), kind="stable")
        j = next(int(j) for j in order if j not in taken)
        taken.append(j)
        cols.append(v[:, j])
    return np.column_stack(cols)


def _gauge_symmetric(coeffs: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Sign gauge: symmetric-triplet component nonnegative, falling back
    to a nonnegative largest-magnitude component."""
    c = np.real_if_close(coeffs).astype(float)
    if abs(c[1]) > tol:
        return c if c[1] > 0 else -c
    k = int(np.argmax(np.abs(c)))
    return c if c[k] >= 0 else -c


def singlet_degeneracy_bz(bx: float, d12: float, gamma_c: float | None = None) -> float:
    """Axial field (Gauss) that pulls the third eigenvalue to zero.

    Solves R = 0, i.e. Bz = sqrt(d12^2 + 2 gamma_c^2 Bx^2) / (2 gamma_c),
    which makes the cubic angle pi/2 and degenerates labels 2 and 3.
    """
    from .hamiltonians import PhysicalConstants

    if bx < 0:
        raise ValueError("Bx must be nonnegative")
    gc = PhysicalConstants().gamma_c if gamma_c is None else gamma_c
    return np.sqrt(d12**2 + 2.0 * (gc * bx) ** 2) / (2.0 * gc)


# ---------------------------------------------------------------------------
# bipartite (single-carbon) eigensystem
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BipartiteEigensystem:
    """Analytic eigensystem of the NV + single-carbon Hamiltonian.

    energies: (6,) in label order; states: (6, 6) complex, column i is
    state i+1 on the composite basis {+1 up, +1 down, 0 up, 0 down,
    -1 up, -1 down}.  Labels 1/2 span m_s=0 with mixing angle theta,
    labels 3..6 are bare products.
    """

    bx: float
    bz: float
    energies: np.ndarray
    states: np.ndarray
    mixing_theta: float

    def restricted(self, indices: np.ndarray, labels: tuple[int, ...]) -> np.ndarray:
        """State columns for the given labels on a restricted basis."""
        return self.states[np.ix_(indices, [l - 1 for l in labels])]


def bipartite_eigensystem(b: tuple[float, float], cfg: RegisterConfig) -> BipartiteEigensystem:
    """Mixing-angle eigensystem of the NV + one-carbon register.

    tan(theta) = Bx / (B + Bz) with B = sqrt(Bx^2 + Bz^2).  Warns when
    A_zz / (gamma_c Bx) < 10, where treating the m_s=+-1 eigenstates as
    bare products starts to degrade.
    """
    if cfg.n_carbons != 1:
        raise ValueError("bipartite_eigensystem requires a single-carbon config")
    bx, bz = float(b[0]), float(b[1])
    c = cfg.constants
    azz = cfg.carbons[0].a_zz
    if bx != 0.0 and azz < 10.0 * c.gamma_c * abs(bx):
        warnings.warn(
            "A_zz is not large against gamma_c*Bx; bare m_s=+-1 eigenstates "
            "become a poor approximation",
            stacklevel=2,
        )

    btot = np.hypot(bx, bz)
    theta = float(np.arctan2(bx, btot + bz))
    half_split = 0.5 * np.sqrt((c.gamma_c * bx) ** 2 + (azz + c.gamma_c * bz) ** 2)
    energies = np.array(
        [
            0.5 * c.gamma_c * btot,
            -0.5 * c.gamma_c * btot,
            c.d + c.gamma_e * bz + half_split,
            c.d + c.gamma_e * bz - half_split,
            c.d - c.gamma_e * bz + half_split,
            c.d - c.gamma_e * bz - half_split,
        ]
    )
    states = np.zeros((6, 6), dtype=complex)
    ct, st = np.cos(theta), np.sin(theta)
    states[2, 0], states[3, 0] = ct, st     # label 1: cos|0 up> + sin|0 down>
    states[2, 1], states[3, 1] = st, -ct    # label 2: sin|0 up> - cos|0 down>
    states[0, 2] = 1.0                      # label 3: |+1 up>
    states[1, 3] = 1.0                      # label 4: |+1 down>
    states[4, 4] = 1.0                      # label 5: |-1 up>
    states[5, 5] = 1.0                      # label 6: |-1 down>
    return BipartiteEigensystem(bx=bx, bz=bz, energies=energies, states=states, mixing_theta=theta)


# ---------------------------------------------------------------------------
# numerical oracle and state labeling
# ---------------------------------------------------------------------------


def numerical_eig(h: np.ndarray, herm_tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Dense Hermitian eigendecomposition with a deterministic gauge.

    Eigenvalues ascending; each eigenvector's global phase is fixed so its
    largest-magnitude component is real and nonnegative.  Non-Hermitian
    input is rejected.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, herm_tol):
        raise ValueError("numerical_eig requires a Hermitian matrix")
    w, v = np.linalg.eigh(h)
    for k in range(v.shape[1]):
        v[:, k] = fix_global_phase(v[:, k])
    return w, v


@dataclass(frozen=True)
class LabelingResult:
    """Assignment of numerical eigenvectors to analytic labels.

    permutation[i] is the numerical column matched to analytic column i;
    overlaps[i] the corresponding |<num|ana>|; ties records indices where
    two candidates were within 1e-6 and the lower analytic index won.
    """

    permutation: np.ndarray
    overlaps: np.ndarray
    ties: tuple[int, ...]


def label_states(
    numerical: np.ndarray,
    analytic_reference: np.ndarray,
    min_overlap: float = 0.9,
    tie_tol: float = 1e-6,
) -> LabelingResult:
    """Greedy maximum-overlap matching of numerical to analytic states.

    Both arguments are matrices with states in columns and must share
    dimensions.  Every assigned overlap must reach ``min_overlap``,
    otherwise the labeling fails loudly.
    """
    num = np.asarray(numerical, dtype=complex)
    ana = np.asarray(analytic_reference, dtype=complex)
    if num.shape != ana.shape:
        raise ValueError("numerical and analytic state sets must match in shape")
    n = num.shape[1]
    overlap = np.abs(num.conj().T @ ana)  # rows: numerical, cols: analytic
    perm = -np.ones(n, dtype=int)
    overlaps = np.zeros(n)
    ties: list[int] = []
    free_num = set(range(n))
    free_ana = set(range(n))
    for _ in range(n):
        best = -1.0
        pick = None
        for j in sorted(free_ana):
            for i in sorted(free_num):
                val = overlap[i, j]
                if val > best + tie_tol:
                    best, pick = val, (i, j)
                elif abs(val - best) <= tie_tol and pick is not None and j < pick[1]:
                    pick = (i, j)
                    ties.append(j)
        i, j = pick
        perm[j] = i
        overlaps[j] = overlap[i, j]
        free_num.discard(i)
        free_ana.discard(j)
    if overlaps.min() < min_overlap:
        worst = int(np.argmin(overlaps))
        raise ValueError(
            f"state labeling failed: analytic state {worst} best overlap "
            f"{overlaps[worst]:.4f} < {min_overlap}"
        )
    return LabelingResult(permutation=perm, overlaps=overlaps, ties=tuple(sorted(set(ties))))
