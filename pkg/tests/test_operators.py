import numpy as np
import pytest

from nvdfs.operators import (
    embed,
    fix_global_phase,
    identity,
    pair_operator,
    spin1_operators,
    spin_half_operators,
)


def test_spin1_sz_annihilates_middle_state():
    s = spin1_operators()
    ket0 = np.array([0, 1, 0], dtype=complex)
    assert np.abs(s.sz @ ket0).max() == 0.0


def test_spin1_commutator():
    s = spin1_operators()
    comm = s.sx @ s.sy - s.sy @ s.sx
    assert np.abs(comm - 1j * s.sz).max() <= 1e-14


def test_spin1_casimir():
    s = spin1_operators()
    total = s.sx @ s.sx + s.sy @ s.sy + s.sz @ s.sz
    assert np.abs(total - 2.0 * identity(3)).max() <= 1e-14


def test_spin_half_raising():
    h = spin_half_operators()
    down = np.array([0, 1], dtype=complex)
    up = np.array([1, 0], dtype=complex)
    assert np.abs(h.iplus @ down - up).max() == 0.0
    assert h.iz[0, 0] == 0.5 and h.iz[1, 1] == -0.5


def test_spin_half_anticommutator():
    h = spin_half_operators()
    anti = h.iplus @ h.iminus + h.iminus @ h.iplus
    assert np.abs(anti - identity(2)).max() <= 1e-14


def test_embed_traceless_and_dim():
    h = spin_half_operators()
    op = embed(h.iz, 1, [3, 2, 2])
    assert op.shape == (12, 12)
    assert abs(np.trace(op)) <= 1e-14


def test_embed_identity():
    op = embed(identity(2), 2, [3, 2, 2])
    assert np.abs(op - identity(12)).max() == 0.0


def test_embed_matches_direct_kron():
    s = spin1_operators()
    h = spin_half_operators()
    left = embed(s.sz, 0, [3, 2, 2]) @ embed(h.iz, 1, [3, 2, 2])
    direct = np.kron(s.sz, np.kron(h.iz, identity(2)))
    assert np.abs(left - direct).max() <= 1e-14


def test_embed_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        embed(identity(2), 0, [3, 2, 2])


def test_embed_commutes_across_sites():
    rng = np.random.default_rng(7)
    for _ in range(5):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        a = a + a.conj().T
        b = b + b.conj().T
        oa = embed(a, 1, [3, 2, 2])
        ob = embed(b, 2, [3, 2, 2])
        assert np.abs(oa @ ob - ob @ oa).max() <= 1e-13


def test_constructors_bitwise_reproducible():
    s1, s2 = spin1_operators(), spin1_operators()
    for a, b in zip(s1, s2):
        assert np.array_equal(a, b)
    p1 = pair_operator(spin_half_operators().iz, None)
    p2 = pair_operator(spin_half_operators().iz, None)
    assert np.array_equal(p1, p2)


def test_pair_operator_basis_order():
    # pair basis is {dd, du, ud, uu}: Iz of the first nucleus is
    # diag(-1/2, -1/2, +1/2, +1/2)
    h = spin_half_operators()
    iz1 = pair_operator(h.iz, None)
    assert np.allclose(np.diag(iz1), [-0.5, -0.5, 0.5, 0.5])
    iz2 = pair_operator(None, h.iz)
    assert np.allclose(np.diag(iz2), [-0.5, 0.5, -0.5, 0.5])


def test_fix_global_phase():
    v = np.array([0.3j, -0.9, 0.1], dtype=complex)
    fixed = fix_global_phase(v)
    k = int(np.argmax(np.abs(fixed)))
    assert fixed[k].imag == pytest.approx(0.0, abs=1e-15)
    assert fixed[k].real > 0
    # norm preserved
    assert np.linalg.norm(fixed) == pytest.approx(np.linalg.norm(v), rel=1e-15)
