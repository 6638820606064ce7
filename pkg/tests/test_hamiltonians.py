import numpy as np
import pytest
from scipy.optimize import brentq

from nvdfs.hamiltonians import (
    CarbonParams,
    FieldSchedule,
    PhysicalConstants,
    RegisterConfig,
    dipolar_coupling,
    h_bipartite,
    h_full_tripartite,
    h_ms0,
    h_ms1_full,
    h_ms1_simple,
    khz,
    manifold_restrict,
    mhz,
    single_carbon_config,
)
from nvdfs.operators import is_hermitian


@pytest.fixture
def cfg():
    return RegisterConfig()


def test_default_constants(cfg):
    c = cfg.constants
    assert c.d == pytest.approx(2 * np.pi * 2870.0)
    assert c.gamma_e == pytest.approx(2 * np.pi * 2.8)
    assert c.gamma_c == pytest.approx(2 * np.pi * 1.07e-3)
    assert cfg.d12 == pytest.approx(2 * np.pi * 4e-3)
    assert cfg.t2e_star == 7.0
    assert [c.t2n_star for c in cfg.carbons] == [500.0, 700.0]
    assert cfg.carbons[0].a_zz == pytest.approx(mhz(12.45))
    assert cfg.carbons[1].a_zz == pytest.approx(mhz(2.28))
    assert cfg.carbons[0].a_ani == pytest.approx(mhz(1.16))
    assert cfg.carbons[1].a_ani == pytest.approx(mhz(0.24))


# --- dipolar coupling ------------------------------------------------------


def test_dipolar_monotone_decreasing():
    grid = np.linspace(0.05, 2.0, 40)
    vals = [dipolar_coupling(r) for r in grid]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_dipolar_cubic_scaling():
    d1 = dipolar_coupling(0.3)
    d2 = dipolar_coupling(0.6)
    assert d1 / d2 == pytest.approx(8.0, rel=1e-12)


def test_dipolar_round_trip_via_root_finder():
    # independently invert the coupling law with a bracketing root finder
    target = khz(4.0)
    r_star = brentq(lambda r: dipolar_coupling(r) - target, 0.01, 10.0, xtol=1e-13)
    assert dipolar_coupling(r_star) == pytest.approx(target, rel=1e-9)
    # sanity: the corresponding distance is an angstrom-scale separation
    assert 0.05 < r_star < 0.5


def test_dipolar_rejects_nonpositive():
    with pytest.raises(ValueError):
        dipolar_coupling(0.0)


# --- manifold Hamiltonians -------------------------------------------------


def test_h_ms0_zero_field_is_pure_dipolar(cfg):
    h = h_ms0((0.0, 0.0), cfg)
    d = cfg.d12
    expected = np.array(
        [
            [-d / 2, 0, 0, 0],
            [0, d / 2, d / 2, 0],
            [0, d / 2, d / 2, 0],
            [0, 0, 0, -d / 2],
        ],
        dtype=complex,
    )
    assert np.abs(h - expected).max() <= 1e-14


def test_h_ms0_singlet_zero_eigenvector(cfg):
    rng = np.random.default_rng(3)
    singlet = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    for _ in range(5):
        bx, bz = rng.uniform(0, 150), rng.uniform(0, 100)
        h = h_ms0((bx, bz), cfg)
        assert np.abs(h @ singlet).max() <= 1e-12 * max(np.abs(h).max(), 1.0)


def test_h_ms0_decoupled_spins_eigenvalues(cfg):
    cfg0 = cfg.replace(d12=0.0)
    h = h_ms0((50.0, 0.0), cfg0)
    w = np.linalg.eigvalsh(h)
    gb = cfg.constants.gamma_c * 50.0
    assert np.allclose(sorted(w), sorted([gb, -gb, 0.0, 0.0]), atol=1e-12)


def test_h_ms0_swap_symmetry(cfg):
    # with identical carbon parameters the pair Hamiltonian commutes with
    # the nuclear label exchange
    swap = np.zeros((4, 4))
    swap[0, 0] = swap[3, 3] = 1.0
    swap[1, 2] = swap[2, 1] = 1.0
    h = h_ms0((80.0, 40.0), cfg)
    assert np.abs(swap @ h @ swap - h).max() <= 1e-13


def test_h_ms1_simple_diagonal_entries(cfg):
    bz = 30.0
    h = h_ms1_simple((100.0, bz), cfg)
    offset = cfg.constants.d + cfg.constants.gamma_e * bz
    a1, a2 = cfg.carbons[0].a_zz, cfg.carbons[1].a_zz
    assert np.abs(h - np.diag(np.diag(h))).max() == 0.0
    assert h[1, 1].real == pytest.approx(offset - a1 / 2 + a2 / 2, rel=1e-14)
    # gap structure: state 2 sits one a_zz(2) above state 1
    assert (h[1, 1] - h[0, 0]).real == pytest.approx(a2, rel=1e-12)


def test_h_ms1_full_reduces_to_simple(cfg):
    iso = cfg.replace(
        carbons=(
            CarbonParams(a_zz=mhz(12.45), a_ani=0.0, t2n_star=500.0),
            CarbonParams(a_zz=mhz(2.28), a_ani=0.0, t2n_star=700.0),
        )
    )
    hf = h_ms1_full((0.0, 0.0), iso)
    hs = h_ms1_simple((0.0, 0.0), iso)
    assert np.abs(hf - hs).max() <= 1e-12


def test_h_ms1_full_offdiagonal_entry(cfg):
    bx = 40.0
    h = h_ms1_full((bx, 10.0), cfg)
    w2x = 0.5 * (cfg.constants.gamma_c * bx + cfg.carbons[1].a_ani)
    assert h[0, 1] == pytest.approx(w2x, rel=1e-12)
    assert is_hermitian(h)


def test_h_ms1_full_hermitian_with_phases(cfg):
    phased = cfg.replace(
        carbons=(
            CarbonParams(a_zz=mhz(12.45), a_ani=mhz(1.16), phi=0.7, t2n_star=500.0),
            CarbonParams(a_zz=mhz(2.28), a_ani=mhz(0.24), phi=-1.1, t2n_star=700.0),
        )
    )
    assert is_hermitian(h_ms1_full((60.0, 20.0), phased))


def test_tripartite_hermitian_random_fields(cfg):
    rng = np.random.default_rng(11)
    for _ in range(5):
        b = (rng.uniform(0, 150), rng.uniform(0, 100))
        assert is_hermitian(h_full_tripartite(b, cfg))


def test_tripartite_ms0_block_matches_h_ms0(cfg):
    b = (100.0, 70.0)
    h12 = h_full_tripartite(b, cfg)
    block, idx = manifold_restrict(h12, "ms0")
    assert list(idx) == [4, 5, 6, 7]
    assert np.abs(block - h_ms0(b, cfg)).max() <= 1e-12 * np.abs(h12).max()


def test_tripartite_ms1_block_matches_h_ms1_full(cfg):
    b = (100.0, 70.0)
    block, idx = manifold_restrict(h_full_tripartite(b, cfg), "ms_plus1")
    assert list(idx) == [0, 1, 2, 3]
    # the +1 block keeps nuclear Zeeman and anisotropic terms but not the
    # pair dipolar coupling
    from nvdfs.hamiltonians import nuclear_pair_dipolar

    expected = h_ms1_full(b, cfg) + nuclear_pair_dipolar(cfg.d12)
    assert np.abs(block - expected).max() <= 1e-12 * np.abs(block).max()


def test_tripartite_isotropic_projection_near_simple(cfg):
    iso = cfg.replace(
        carbons=(
            CarbonParams(a_zz=mhz(12.45), a_ani=0.0, t2n_star=500.0),
            CarbonParams(a_zz=mhz(2.28), a_ani=0.0, t2n_star=700.0),
        )
    )
    b = (0.0, 0.0)
    block, _ = manifold_restrict(h_full_tripartite(b, iso), "ms_plus1")
    from nvdfs.hamiltonians import nuclear_pair_dipolar

    expected = h_ms1_simple(b, iso) + nuclear_pair_dipolar(iso.d12)
    assert np.abs(block - expected).max() <= 1e-12 * np.abs(block).max()


def test_h_full_rejects_single_carbon():
    with pytest.raises(ValueError):
        h_full_tripartite((0.0, 0.0), single_carbon_config())


# --- bipartite -------------------------------------------------------------


def test_bipartite_ms0_block_eigenvalues():
    cfg1 = single_carbon_config()
    bx, bz = 100.0, 10.0
    h = h_bipartite((bx, bz), cfg1)
    block, _ = manifold_restrict(h, "ms0")
    w = np.linalg.eigvalsh(block)
    gb = cfg1.constants.gamma_c * np.hypot(bx, bz) / 2.0
    assert np.allclose(sorted(w), [-gb, gb], atol=1e-12)


def test_bipartite_ms1_block_eigenvalues():
    cfg1 = single_carbon_config()
    bx, bz = 100.0, 10.0
    c = cfg1.constants
    azz = cfg1.carbons[0].a_zz
    block, _ = manifold_restrict(h_bipartite((bx, bz), cfg1), "ms_plus1")
    w = np.linalg.eigvalsh(block)
    center = c.d + c.gamma_e * bz
    half = 0.5 * np.sqrt((c.gamma_c * bx) ** 2 + (azz + c.gamma_c * bz) ** 2)
    assert np.allclose(sorted(w), [center - half, center + half], rtol=1e-12)


def test_bipartite_diagonal_at_zero_bx():
    cfg1 = single_carbon_config()
    h = h_bipartite((0.0, 25.0), cfg1)
    assert np.abs(h - np.diag(np.diag(h))).max() == 0.0


# --- manifold restriction --------------------------------------------------


def test_restrict_identity():
    block, idx = manifold_restrict(np.eye(12, dtype=complex), "both")
    assert block.shape == (8, 8)
    assert np.abs(block - np.eye(8)).max() == 0.0
    assert list(idx) == list(range(8))


def test_restrict_preserves_hermiticity(cfg):
    h = h_full_tripartite((90.0, 45.0), cfg)
    block, _ = manifold_restrict(h, "both")
    assert np.abs(block - block.conj().T).max() <= 1e-14 * np.abs(block).max()


def test_restrict_rejects_unknown_tag():
    with pytest.raises(ValueError):
        manifold_restrict(np.eye(12), "ms_minus1")


# --- field schedule --------------------------------------------------------


def test_field_schedule_interpolation():
    sched = FieldSchedule(
        (
            (0.0, 10.0, 5.0, 100.0, 70.0, 70.0),
            (10.0, 16.5, 100.0, 100.0, 70.0, 5.0),
        )
    )
    assert sched(0.0) == (5.0, 70.0)
    assert sched(5.0) == (52.5, 70.0)
    assert sched(10.0) == (100.0, 70.0)
    assert sched(16.5) == (100.0, 5.0)
    assert sched(100.0) == (100.0, 5.0)  # clamps beyond the span
    assert sched.breakpoints == (10.0,)


def test_field_schedule_rejects_discontinuity():
    with pytest.raises(ValueError):
        FieldSchedule(
            (
                (0.0, 1.0, 0.0, 10.0, 0.0, 0.0),
                (1.0, 2.0, 11.0, 20.0, 0.0, 0.0),
            )
        )


def test_config_validation():
    with pytest.raises(ValueError):
        RegisterConfig(t2e_star=-1.0)
    with pytest.raises(ValueError):
        RegisterConfig(d12=-0.1)
    with pytest.raises(ValueError):
        PhysicalConstants(gamma_c=0.0)
    with pytest.raises(ValueError):
        CarbonParams(a_zz=1.0, a_ani=-0.5)
