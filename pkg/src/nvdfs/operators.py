"""Dense spin operators and tensor-product helpers.

Everything downstream (Hamiltonians, dissipators, frame transformations)
is built from the small set of matrices defined here.  Conventions, fixed
once and used everywhere:

* electron spin 1, basis ordered ``{m_s=+1, m_s=0, m_s=-1}``;
* nuclear spin 1/2, basis ordered ``{|up>, |down>}`` (m_I = +1/2 first);
* two-nucleus manifold operators are expressed in the pair basis
  ``{|dd>, |du>, |ud>, |uu>}`` (down-down first), the ordering in which
  the four-level manifold Hamiltonians are conventionally written;
* hbar = 1, all angular frequencies in rad/us.

Operators are plain complex ``numpy`` arrays; states are 1-d complex
arrays.  All constructors are deterministic.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = [
    "Spin1Ops",
    "SpinHalfOps",
    "spin1_operators",
    "spin_half_operators",
    "identity",
    "embed",
    "pair_operator",
    "ket",
    "fix_global_phase",
    "is_hermitian",
    "assert_hermitian",
    "check_density_matrix",
    "PAIR_BASIS_LABELS",
]

#: basis labels of the two-nucleus manifold space, index order used
#: by every 4x4 manifold Hamiltonian and eigensystem in this package.
PAIR_BASIS_LABELS = ("dd", "du", "ud", "uu")


class Spin1Ops(NamedTuple):
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray


class SpinHalfOps(NamedTuple):
    ix: np.ndarray
    iy: np.ndarray
    iz: np.ndarray
    iplus: np.ndarray
    iminus: np.ndarray


def spin1_operators() -> Spin1Ops:
    """Spin-1 matrices in the basis ``{m_s=+1, 0, -1}``.

    ``sz = diag(+1, 0, -1)``; ``sx``/``sy`` follow the standard ladder
    construction, so ``[sx, sy] = i sz`` and ``sx^2+sy^2+sz^2 = 2*I``.
    """
    s = np.sqrt(2.0)
    splus = np.array([[0, s, 0], [0, 0, s], [0, 0, 0]], dtype=complex)
    sminus = splus.conj().T
    sx = (splus + sminus) / 2.0
    sy = (splus - sminus) / 2.0j
    sz = np.diag([1.0, 0.0, -1.0]).astype(complex)
    return Spin1Ops(sx, sy, sz)


def spin_half_operators() -> SpinHalfOps:
    """Spin-1/2 matrices in the basis ``{|up>, |down>}``.

    ``iz = diag(+1/2, -1/2)``; ``iplus = ix + i*iy`` raises ``|down>``
    to ``|up>`` with unit amplitude.
    """
    ix = 0.5 * np.array([[0, 1], [1, 0]], dtype=complex)
    iy = 0.5 * np.array([[0, -1j], [1j, 0]], dtype=complex)
    iz = np.diag([0.5, -0.5]).astype(complex)
    return SpinHalfOps(ix, iy, iz, ix + 1j * iy, ix - 1j * iy)


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def embed(op: np.ndarray, site_index: int, dims: list[int]) -> np.ndarray:
    """Kronecker-embed a single-site operator into the composite space.

    Site order is ``(NV, C1, C2)``; indices within each factor follow the
    per-site conventions above, and the composite index is lexicographic
    over the factors in that order.

    Raises ``ValueError`` when ``op`` does not match ``dims[site_index]``.
    """
    op = np.asarray(op, dtype=complex)
    if not (0 <= site_index < len(dims)):
        raise ValueError(f"site_index {site_index} out of range for dims {dims}")
    if op.shape != (dims[site_index], dims[site_index]):
        raise ValueError(
            f"operator of shape {op.shape} cannot sit at site {site_index} "
            f"with dims {dims}"
        )
    out = np.eye(1, dtype=complex)
    for k, d in enumerate(dims):
        out = np.kron(out, op if k == site_index else np.eye(d, dtype=complex))
    return out


# The pair basis {dd, du, ud, uu} is lexicographic over single-nucleus
# order {down, up}, i.e. the single-site {up, down} matrices conjugated
# by the 2x2 swap before taking Kronecker products.
_SWAP2 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def pair_operator(op1: np.ndarray | None, op2: np.ndarray | None) -> np.ndarray:
    """Product operator ``op1 (x) op2`` on the two-nucleus pair basis.

    ``op1``/``op2`` are 2x2 single-nucleus operators in the ``{up, down}``
    basis of :func:`spin_half_operators`; ``None`` means identity.  The
    result is 4x4 in the ``{dd, du, ud, uu}`` pair basis.
    """
    mats = []
    for op in (op1, op2):
        if op is None:
            mats.append(np.eye(2, dtype=complex))
        else:
            op = np.asarray(op, dtype=complex)
            if op.shape != (2, 2):
                raise ValueError(f"pair_operator expects 2x2 factors, got {op.shape}")
            mats.append(_SWAP2 @ op @ _SWAP2)
    return np.kron(mats[0], mats[1])


def ket(dim: int, index: int) -> np.ndarray:
    """Computational basis vector ``|index>`` of a ``dim``-level space."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def fix_global_phase(vec: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude component is real
    and nonnegative (ties broken by lowest index)."""
    vec = np.asarray(vec, dtype=complex)
    mags = np.abs(vec)
    k = int(np.argmax(mags > mags.max() - tol))
    if mags[k] <= tol:
        return vec.copy()
    return vec * (vec[k].conjugate() / mags[k])


def is_hermitian(op: np.ndarray, tol: float = 1e-12) -> bool:
    """Relative Hermiticity test: max|H - H^dag| <= tol * max|H|."""
    op = np.asarray(op)
    scale = max(np.abs(op).max(), 1.0)
    return bool(np.abs(op - op.conj().T).max() <= tol * scale)


def assert_hermitian(op: np.ndarray, tol: float = 1e-12, name: str = "operator") -> None:
    if not is_hermitian(op, tol):
        resid = np.abs(op - op.conj().T).max()
        raise ValueError(f"{name} is not Hermitian (residual {resid:.3e})")


def check_density_matrix(
    rho: np.ndarray,
    trace_tol: float = 1e-8,
    herm_tol: float = 1e-10,
    eig_floor: float = -1e-8,
) -> None:
    """Validate trace, Hermiticity and positivity of a density matrix.

    Raises ``ValueError`` with the offending quantity on failure.
    """
    rho = np.asarray(rho, dtype=complex)
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr} deviates from 1 beyond {trace_tol}")
    if np.abs(rho - rho.conj().T).max() > herm_tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w.min() < eig_floor:
        raise ValueError(f"density matrix has negative eigenvalue {w.min():.3e}")
