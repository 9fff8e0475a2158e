"""Stabilized multirate explicit integration of singularly perturbed ODEs."""

from .errors import (
    BlowUpError,
    ConfigError,
    ConvergenceError,
    DimensionError,
    SeparationError,
    SmesError,
    StabilityError,
    UnsupportedSizeError,
)
from .model import (
    InputSignal,
    IntegratorConfig,
    OdeSystem,
    ReducedSystem,
    Trajectory,
    eval_rhs,
    input_at,
)
from .integrators import (
    MacroStepReport,
    fem_integrate,
    linear_macro_matrix,
    rk_reference_integrate,
    smfe_integrate,
    smfe_macro_step,
)
from .spectral import (
    DecouplingResult,
    LinearSps,
    SpectralSplit,
    block_triangularize,
    coupling_series_l,
    eigenvalues,
    refine_l,
    split_spectrum,
)
from .stability import (
    ScalarSps,
    StabilityReport,
    appendix_fem_delta,
    cost_estimate,
    deadbeat_delta,
    fem_max_delta,
    min_small_steps,
    scalar_eigenvalues,
    smfe_stable,
)
from .error_bounds import (
    ManifoldDiagnostics,
    fast_residual_bound,
    manifold_distance,
    reduced_fem_integrate,
    slow_drift,
)
from .metrics import ComparisonResult, align_and_mse
from .systems import BuiltSystem, build_system, linear_system

__version__ = "0.1.0"
