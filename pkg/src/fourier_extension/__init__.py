"""Fourier extension approximation and parameter studies.

Functions on [-1, 1] are approximated by trigonometric polynomials that are
periodic on the larger interval [-T, T], fitted by truncated-SVD least
squares. The study tools measure how stable and how accurate such fits are
as the sample count M, the number of modes 2N+1 and T vary.
"""

from .core import (
    DEFAULT_EPSILON,
    DesignMatrix,
    ExtensionMap,
    FEConfig,
    TrigSeries,
    basis_matrix,
    build_design_matrix,
    evaluate_series,
    grid_nodes,
    grid_size,
    grid_values,
    map_forward,
    map_inverse,
    max_geometric_rate,
    mode_indices,
    sample_function,
)
from .diagnostics import (
    DEFAULT_K,
    DiagnosticsRecord,
    EvalGrid,
    condition_number,
    condition_number_l2,
    defect_constant,
    defect_constant_l2,
    diagnose,
    gram_factor,
    gram_matrix,
    gram_sqrt,
    mu_ratio,
    response_matrix,
    worst_case_data,
)
from .errors import (
    ConfigurationError,
    DataError,
    DomainError,
    FEError,
    GenerationError,
    InsufficientDataError,
    NotResolvedError,
    NumericalError,
    ParameterError,
    ShapeError,
)
from .functions import F1_OMEGA, RESOLUTION_OMEGA, TEST_FUNCTIONS, oscillation, test_function
from .io import ExperimentConfig
from .sampling import (
    SampleSet,
    build_fourier_design_matrix,
    equispaced_nodes,
    fourier_data,
    fourier_modes,
    jittered_nodes,
    log_nodes,
    make_sample_set,
    mapped_chebyshev_nodes,
)
from .solvers import (
    PivotedQR,
    SolveReport,
    SolverSpec,
    TruncatedSVD,
    available_solvers,
    factorize,
    register_solver,
    singular_values,
    solve,
    svd_truncated_solve,
)
from .study import (
    DataSpec,
    RegressionFit,
    ResolutionCurve,
    ThetaCurve,
    ThetaPoint,
    approximation_error,
    budgeted_error,
    en_estimate,
    fe_approximation,
    fit_nu,
    fit_tau,
    resolution,
    resolution_constant,
    run_jobs,
    saturation_check,
    theta,
    theta_curve,
    theta_point,
)

__version__ = "0.1.0"
