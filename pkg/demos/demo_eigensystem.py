"""Closed-form register eigensystem: levels, the protected singlet, and
the field condition that makes the two logic states degenerate.

The two-carbon m_s=0 manifold splits into a field-independent singlet at
exactly zero energy plus a symmetric triplet sector whose three levels
follow a trigonometric cubic solution.  This script sweeps the axial
field at fixed transverse field, draws the level diagram, and marks the
degeneracy point where the third level crosses zero.

Run:  python3 demos/demo_eigensystem.py   (writes demos/output/levels.png)
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from nvdfs import (
    RegisterConfig,
    h_ms0,
    ms0_eigensystem,
    numerical_eig,
    singlet_degeneracy_bz,
)

cfg = RegisterConfig()
gc = cfg.constants.gamma_c

bx = 100.0
bz_grid = np.linspace(0.0, 100.0, 400)
energies = np.array([ms0_eigensystem((bx, bz), cfg.d12, gc).energies for bz in bz_grid])

bz_star = singlet_degeneracy_bz(bx, cfg.d12, gc)
print(f"transverse field Bx = {bx} G")
print(f"degeneracy field   Bz = {bz_star:.3f} G (logic states share zero energy there)")

eig = ms0_eigensystem((bx, bz_star), cfg.d12, gc)
print("energies at the degeneracy point (rad/us):", np.round(eig.energies, 6))
print("singlet row (field-independent):", np.round(np.real(eig.states[:, 1]), 4))

# cross-check the closed form against dense diagonalization at a few points
for bz in (0.0, 25.0, bz_star, 90.0):
    e = ms0_eigensystem((bx, bz), cfg.d12, gc)
    w, _ = numerical_eig(h_ms0((bx, bz), cfg))
    resid = max(
        abs(w - val).min() for val in e.energies
    )
    print(f"  Bz = {bz:7.3f} G: closed form vs dense solver, worst gap {resid:.2e}")

outdir = Path(__file__).parent / "output"
outdir.mkdir(exist_ok=True)
fig, ax = plt.subplots(figsize=(7, 4.5))
labels = ["state 1", "state 2 (singlet)", "state 3", "state 4"]
for k in range(4):
    ax.plot(bz_grid, energies[:, k] / (2 * np.pi) * 1e3, label=labels[k])
ax.axvline(bz_star, color="k", ls=":", lw=1, label=f"degeneracy at {bz_star:.1f} G")
ax.set_xlabel("axial field Bz (G)")
ax.set_ylabel("energy / 2pi (kHz)")
ax.set_title(f"register levels in the m_s=0 manifold at Bx = {bx:.0f} G")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(outdir / "levels.png", dpi=160)
print(f"wrote {outdir / 'levels.png'}")
