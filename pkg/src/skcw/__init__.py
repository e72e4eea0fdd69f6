"""Numerical laboratory for mixed even-spin glasses coupled to a mean-field
ferromagnet: hierarchical variational free energies, the scalar ferromagnetic
layer, finite-size sampling, and cross-verification between them."""

from .errors import (
    BracketError,
    ConfigError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    GridError,
)
from .model import (
    GaussianField,
    MixtureXi,
    TemperaturePoint,
    theta_eval,
    xi_derivs,
    xi_eval,
    xi_prime,
)
from .quadrature import expect_gaussian, gauss_hermite_rule
from .cw import (
    alpha_critical,
    at_line_check,
    beta_for_magnetization,
    cw_curve,
    cw_fixed_point,
    delta_u,
    field_condition,
    field_condition_threshold,
    region_contains,
    rs_solve,
)
from .parisi import (
    DiscreteMeasure,
    GridSpec,
    ParisiResult,
    PhiFunction,
    default_grid,
    dirac,
    measure_distance,
    parisi_functional,
    parisi_minimize,
    parisi_moment,
    phi_solve,
    sk_beta_p_derivative,
    sk_free_energy,
)
from .variational import (
    ArgmaxReport,
    BoundCheck,
    classify_Bd,
    classify_maximizers,
    magnetization_overlap_bound_check,
    overlap_support_min,
    predicted_overlap_law,
    skfi_free_energy,
    skfi_objective,
)
from .stats import MomentAccumulator, blocked_stderr, jackknife_stderr
from .simulator import (
    DerivativeCheck,
    DisorderSample,
    SimulationParams,
    SimulationResult,
    enumerate_exact,
    estimate_observables,
    finite_n_derivative_check,
    gg_residual,
    hamiltonian,
    replica_bound_check,
    sample_disorder,
)

__version__ = "0.1.0"
