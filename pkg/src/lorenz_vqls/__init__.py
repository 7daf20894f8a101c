"""Lorenz integration through per-step linear embeddings, solved either with
a classical direct solver or with a simulated variational quantum linear
solver."""

from .analysis import (
    ErrorSeries,
    RichardsonEstimate,
    compare_trajectories,
    condition_sweep,
    default_h_grid,
    relative_error,
    richardson,
    richardson_series,
)
from .circuit import AnsatzConfig, expectation, run_ansatz
from .linalg import (
    condition_number,
    hermitian_dilation,
    pad_to_power_of_two,
    solve_dense,
)
from .lorenz import (
    LorenzParams,
    State3,
    StepDiagnostics,
    Trajectory,
    build_block_system,
    build_linear_step,
    build_nonlinear_system,
    build_rhs,
    fixed_points,
    step_explicit,
    step_solve,
    trajectory,
)
from .pauli import PauliSum, PauliTerm, apply_term, decompose, reconstruct
from .vqls import (
    VqlsConfig,
    VqlsOutcome,
    VqlsProblem,
    build_problem,
    cost,
    cost_hamiltonian,
    error_bound,
    extract_solution,
    gradient,
    optimize,
    trace_distance,
)

__all__ = [
    "AnsatzConfig",
    "ErrorSeries",
    "LorenzParams",
    "PauliSum",
    "PauliTerm",
    "RichardsonEstimate",
    "State3",
    "StepDiagnostics",
    "Trajectory",
    "VqlsConfig",
    "VqlsOutcome",
    "VqlsProblem",
    "apply_term",
    "build_block_system",
    "build_linear_step",
    "build_nonlinear_system",
    "build_problem",
    "build_rhs",
    "compare_trajectories",
    "condition_number",
    "condition_sweep",
    "cost",
    "cost_hamiltonian",
    "decompose",
    "default_h_grid",
    "error_bound",
    "expectation",
    "extract_solution",
    "fixed_points",
    "gradient",
    "hermitian_dilation",
    "optimize",
    "pad_to_power_of_two",
    "reconstruct",
    "relative_error",
    "richardson",
    "richardson_series",
    "run_ansatz",
    "solve_dense",
    "step_explicit",
    "step_solve",
    "trace_distance",
    "trajectory",
]
