"""Hopf bifurcations and symmetric periodic orbits on a torus of
unidirectionally coupled FitzHugh-Nagumo cells.

The lattice is an N x N array (N an odd prime) of planar cells

    x' = x(a - x)(x - 1) - y
    y' = b x - c y

with each cell's x pulled toward its right and upper neighbours with
weights gamma and delta, periodic in both directions.  The package
provides the closed-form origin spectrum, the critical parameter
values where stability is lost, the symmetry classification of the
bifurcating periodic solutions, and numerical tools (integration,
orbit detection, spatio-temporal classification) to verify them.
"""

from .errors import (
    BracketError,
    ClassificationError,
    DegenerateCouplingWarning,
    DimensionMismatchError,
    DomainError,
    InvarianceError,
    LatticeSizeError,
    StiffnessError,
)
from .model import (
    CellParams,
    CouplingParams,
    LatticeParams,
    assemble_jacobian_origin,
    from_grids,
    infer_n,
    is_odd_prime,
    jacobian_at,
    jacobian_blocks_origin,
    rhs_cell,
    rhs_network,
    state_dim,
    to_grids,
)
from .symmetry import (
    IsotropySubgroup,
    IsotypicComponent,
    ModeIndex,
    SymmetryPrediction,
    act,
    canonical_mode,
    embed_pattern,
    fix_modes,
    fix_projection,
    group_elements,
    isotropy_of,
    isotypic_component,
    mode_basis,
    mode_coordinate,
    mode_index_set,
    predict_hopf_symmetries,
    project_isotypic,
)
from .spectral import (
    EigenRecord,
    analytic_eigenvalues,
    analytic_eigenvector,
    coupling_symbol,
    eigenvalue_grids,
    genericity_violations,
    principal_sqrt,
    symbol_grid,
    spectrum_report,
    uncoupled_eigenvalues,
)
from .bifurcation import (
    CriticalPoint,
    CrossingMode,
    DulacCertificate,
    HopfReport,
    ProbeResult,
    ProbeSettings,
    Resonance,
    StabilityVerdict,
    branch_criticality_probe,
    critical_a,
    dulac_certificate,
    hopf_crossing,
    hopf_report_at_critical,
    locate_stability_loss,
    lyapunov_coefficient_sync,
    origin_stability,
    psi,
    resonance_check,
    resonant_coupling,
    stability_margin,
    theta_n,
)
from .simulate import (
    OrbitDetectSettings,
    OrbitSymmetry,
    PeriodicOrbit,
    Trajectory,
    classify_spatiotemporal,
    detect_periodic_orbit,
    integrate,
    reduced_integrate_fix,
)
from .cli import emit_report, parse_and_dispatch

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "ClassificationError",
    "DegenerateCouplingWarning",
    "DimensionMismatchError",
    "DomainError",
    "InvarianceError",
    "LatticeSizeError",
    "StiffnessError",
    "CellParams",
    "CouplingParams",
    "LatticeParams",
    "assemble_jacobian_origin",
    "from_grids",
    "infer_n",
    "is_odd_prime",
    "jacobian_at",
    "jacobian_blocks_origin",
    "rhs_cell",
    "rhs_network",
    "state_dim",
    "to_grids",
    "IsotropySubgroup",
    "IsotypicComponent",
    "ModeIndex",
    "SymmetryPrediction",
    "act",
    "canonical_mode",
    "embed_pattern",
    "fix_modes",
    "fix_projection",
    "group_elements",
    "isotropy_of",
    "isotypic_component",
    "mode_basis",
    "mode_coordinate",
    "mode_index_set",
    "predict_hopf_symmetries",
    "project_isotypic",
    "EigenRecord",
    "analytic_eigenvalues",
    "analytic_eigenvector",
    "coupling_symbol",
    "eigenvalue_grids",
    "genericity_violations",
    "principal_sqrt",
    "spectrum_report",
    "symbol_grid",
    "uncoupled_eigenvalues",
    "CriticalPoint",
    "CrossingMode",
    "DulacCertificate",
    "HopfReport",
    "ProbeResult",
    "ProbeSettings",
    "Resonance",
    "StabilityVerdict",
    "branch_criticality_probe",
    "critical_a",
    "dulac_certificate",
    "hopf_crossing",
    "hopf_report_at_critical",
    "locate_stability_loss",
    "lyapunov_coefficient_sync",
    "origin_stability",
    "psi",
    "resonance_check",
    "resonant_coupling",
    "stability_margin",
    "theta_n",
    "OrbitDetectSettings",
    "OrbitSymmetry",
    "PeriodicOrbit",
    "Trajectory",
    "classify_spatiotemporal",
    "detect_periodic_orbit",
    "integrate",
    "reduced_integrate_fix",
    "emit_report",
    "parse_and_dispatch",
    "__version__",
]
