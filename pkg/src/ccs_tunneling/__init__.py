"""Coupled coherent states for tunneling in a quartic double well."""

from .ccs import (
    CCSSolveError,
    CCSState,
    NormDriftError,
    assemble,
    coeff_rhs,
    cross_correlation,
    initial_state,
    norm,
    propagate_ccs,
)
from .classical import TrajectorySet, eom_rhs, propagate, step
from .coherent import (
    gram,
    htilde,
    htilde_matrix,
    label_from_qp,
    overlap,
    position_amplitude,
    qp_from_label,
)
from .harness import (
    ConfigError,
    ExperimentConfig,
    GridSpec,
    classify_energies,
    load_config,
    make_grid,
    parse_config,
    run_scenario,
)
from .model import (
    HarmonicOscillator,
    Landmarks,
    ShiftedHamiltonian,
    WellParams,
    grad_h_ord,
    h_ord,
    landmarks,
    potential_ordered,
    potential_plain,
    separatrix_points,
)
from .reference import (
    ReferenceState,
    SplitOperator,
    correlation_reference,
    init_gaussian,
    propagate_reference,
    step_split,
    tunneling_splitting,
)

__version__ = "0.1.0"
