"""Superintegrable charged-particle systems in static magnetic fields.

Field models (uniform, helical, monopole, cylindrically invariant),
Hamiltonian dynamics, integrals of motion and their determining
equations, Poisson-algebra verification, closed-form trajectories, and
separated 1D quantum eigenproblems.
"""

from .algebra import (
    BracketTable,
    casimir_check,
    constantB_basis,
    constantB_bracket_table,
    monopole_admissible,
    monopole_closure_check,
    runge_lenz,
    runge_lenz_functions,
    sample_states,
    verify_bracket_table,
)
from .closedform import (
    PendulumReduction,
    helical_z_of_t,
    helix_solution,
    pendulum_reduction,
    tilde_transform,
    x5_integral,
    x6_integral,
    zeta_solution,
)
from .dynamics import (
    IntegratorConfig,
    PhaseState,
    Trajectory,
    eom_rhs,
    hamiltonian,
    integrate,
)
from .elliptic import (
    agm,
    ellipk,
    inv_am,
    inv_sn,
    jacobi_am,
    jacobi_cn,
    jacobi_dn,
    jacobi_sn,
)
from .errors import (
    ConfigError,
    DegenerateKappa,
    DegenerateMomentum,
    DomainError,
    GridTooSmall,
    MagsuperError,
    NoBoundStates,
    SeparatrixRegime,
    StepFailure,
    UnsupportedModel,
)
from .fields import (
    ConstantB,
    Custom,
    Cylindrical,
    FieldCheckReport,
    GaugeFunction,
    HelicalB,
    Monopole,
    divergence_checks,
    gauge_shift,
    magnetic_field,
    model_from_config,
    scalar_potential,
    vector_potential,
)
from .integrals import (
    CoeffPolynomials,
    IntegralSpec,
    PhaseFunction,
    RESIDUAL_KEYS,
    as_phase_function,
    build_hn_from_alpha,
    covariant_angular_momentum,
    covariant_momentum,
    determining_residuals,
    evaluate_integral,
    hamiltonian_function,
    known_integrals,
    monopole_angular_specs,
    monopole_runge_lenz_specs,
    monopole_total_square_spec,
    phase_gradient,
    poisson_bracket,
)
from .quantum import (
    Grid1D,
    HelicalReducedResult,
    MathieuResult,
    SpectrumResult,
    helical_reduced_solve,
    hermite_check,
    hermite_values,
    landau_reduced_solve,
    mathieu_characteristic,
    mathieu_table,
    radial_reduced_solve,
)

__version__ = "0.1.0"

__all__ = [
    "BracketTable",
    "CoeffPolynomials",
    "ConfigError",
    "ConstantB",
    "Custom",
    "Cylindrical",
    "DegenerateKappa",
    "DegenerateMomentum",
    "DomainError",
    "FieldCheckReport",
    "GaugeFunction",
    "Grid1D",
    "HelicalB",
    "HelicalReducedResult",
    "IntegralSpec",
    "IntegratorConfig",
    "MagsuperError",
    "MathieuResult",
    "Monopole",
    "NoBoundStates",
    "PendulumReduction",
    "PhaseFunction",
    "PhaseState",
    "RESIDUAL_KEYS",
    "SeparatrixRegime",
    "SpectrumResult",
    "StepFailure",
    "Trajectory",
    "UnsupportedModel",
    "agm",
    "as_phase_function",
    "build_hn_from_alpha",
    "casimir_check",
    "constantB_basis",
    "constantB_bracket_table",
    "covariant_angular_momentum",
    "covariant_momentum",
    "determining_residuals",
    "divergence_checks",
    "ellipk",
    "eom_rhs",
    "evaluate_integral",
    "gauge_shift",
    "hamiltonian",
    "hamiltonian_function",
    "helical_reduced_solve",
    "helical_z_of_t",
    "helix_solution",
    "hermite_check",
    "hermite_values",
    "integrate",
    "inv_am",
    "inv_sn",
    "jacobi_am",
    "jacobi_cn",
    "jacobi_dn",
    "jacobi_sn",
    "known_integrals",
    "landau_reduced_solve",
    "magnetic_field",
    "mathieu_characteristic",
    "mathieu_table",
    "model_from_config",
    "monopole_admissible",
    "monopole_angular_specs",
    "monopole_closure_check",
    "monopole_runge_lenz_specs",
    "monopole_total_square_spec",
    "pendulum_reduction",
    "phase_gradient",
    "poisson_bracket",
    "radial_reduced_solve",
    "runge_lenz",
    "runge_lenz_functions",
    "sample_states",
    "scalar_potential",
    "tilde_transform",
    "vector_potential",
    "verify_bracket_table",
    "x5_integral",
    "x6_integral",
    "zeta_solution",
]
