"""nvdfs: an NV- electron spin coupled to one or two 13C nuclear spins.

Library for simulating a decoherence-protected nuclear-spin register in
diamond: exact manifold eigensystems, Lindblad dephasing dynamics,
adiabatic field ramps and microwave pulse protocols, plus a CLI for
reproducible runs (``nvdfs --help``).
"""

from .drive import (
    GaussianPulse,
    LevelSystem,
    PulsePlan,
    build_bipartite_levels,
    build_tripartite_levels,
    chi_coefficients,
    lab_frame_h_bipartite,
    make_intuitive_plan,
    make_rotating_frame,
    make_stirap_plan,
    rotating_h_bipartite,
    rotating_h_tripartite,
)
from .eigensystem import (
    SINGLET,
    BipartiteEigensystem,
    Ms0Eigensystem,
    bipartite_eigensystem,
    label_states,
    ms0_eigensystem,
    numerical_eig,
    singlet_degeneracy_bz,
)
from .hamiltonians import (
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
from .master_equation import (
    Dissipator,
    DissipatorSpec,
    NumericalError,
    Trajectory,
    bloch_length,
    build_dissipators,
    fidelity,
    integrate,
    lindblad_rhs,
    liouvillian,
    mean_energy,
    populations,
)
from .operators import (
    embed,
    fix_global_phase,
    identity,
    spin1_operators,
    spin_half_operators,
)
from .protocols import (
    IntegratorSettings,
    ProtocolResult,
    run_dfs_comparison,
    run_intuitive_baseline,
    run_logic_flip,
    run_preparation,
    run_single_c13,
    run_stirap_vs_bstirap,
)

__version__ = "0.1.0"
