"""Projection-method / BDF2 solver for parabolic equations with quasiperiodic coefficients."""

from .errors import ConfigError, LatticeError, SolverError
from .lattice import (
    Lattice,
    ProjectionMatrix,
    collocation_points,
    frequency_of,
    grid_points,
    tensor_to_vector,
    vector_to_tensor,
)
from .manufactured import (
    ExactSolution,
    exact_coefficients,
    exact_convolution_Lu,
    source_provider,
)
from .metrics import ErrorReport, final_error, l2qp_norm, order_kappa
from .operator import (
    QOperator,
    SparseCoefficient,
    apply_Q,
    assemble_dense,
    build_sparse_from_modes,
    build_sparse_from_samples,
)
from .spectral import GridField, SpectralField, evaluate_at, forward_dft, inverse_dft, truncate
from .stepper import SolveConfig, StepStats, TimeGrid, run, solve_hpd, step_bdf2, step_first

__version__ = "0.1.0"
