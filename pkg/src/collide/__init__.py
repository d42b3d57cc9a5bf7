"""Repeated-collision dynamics of a qubit coupled to a small qubit environment."""

from .qstate import (
    ATOL,
    BlochVector,
    DensityOperator,
    PureState,
    bell_pair,
    bloch_vector,
    partial_trace,
    single_qubit_from_angles,
    tensor,
    tensor_all,
    to_density,
)
from .collision import (
    CollisionParams,
    CollisionSequence,
    Trajectory,
    apply_collision,
    evolve,
    evolve_density,
    partial_swap_pair,
    sequence_explicit,
    sequence_periodic,
    sequence_random,
)
from .observables import (
    AveragedDeviation,
    BlochSeries,
    CorrelationFunction,
    averaged_deviation,
    bloch_series,
    bloch_series_multi,
    exp_decay_fit,
    loglog_slope,
    oscillation_persistence,
    self_correlation,
    state_bloch,
    total_bloch,
)
from .entanglement import (
    DegenerateSpanError,
    NumericalConsistencyError,
    TangleReport,
    ghz_span_residual,
    tangle,
    tangle_pure_cut,
    tangle_report,
    tangle_series,
    three_tangle,
    time_averaged_tangles,
    w_span_residual,
)

__version__ = "0.1.0"
