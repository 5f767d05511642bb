"""Current-record processes: exact laws, enumeration, and simulation of the
number of records broken per step.

The public surface re-exports the core pieces of each module; see the
module docstrings for the underlying conventions.
"""
from .errors import (
    CapacityError,
    InvariantError,
    PartialResultError,
    TieError,
)
from .exact import (
    ExactRational,
    IndexTuple,
    Pmf,
    expected_record_count,
    geometric_limit,
    joint_tail_prob,
    joint_tail_prob_fast,
    p_term,
    prob_b0,
    prob_b1,
    prob_b1_lastrecord,
    remainder_bound,
    single_break_term,
    telescoping_sum,
)
from .montecarlo import (
    AuditReport,
    EmpiricalPmf,
    SimConfig,
    check_trajectory,
    default_checkpoints,
    final_break_counts,
    record_counts,
    simulate_b,
    simulate_b_checkpoints,
    simulate_r,
    simulate_trajectory_audit,
    trial_values,
)
from .oracle import (
    JointPmf,
    oracle_joint,
    oracle_pmf_b,
    oracle_pmf_r,
    oracle_single_break_profile,
)
from .records import (
    RecordEntry,
    RecordStack,
    StepResult,
    TrajectoryStats,
    new_stack,
    records_by_scan,
    run_trajectory,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "CapacityError",
    "EmpiricalPmf",
    "ExactRational",
    "IndexTuple",
    "InvariantError",
    "JointPmf",
    "PartialResultError",
    "Pmf",
    "RecordEntry",
    "RecordStack",
    "SimConfig",
    "StepResult",
    "TieError",
    "TrajectoryStats",
    "check_trajectory",
    "default_checkpoints",
    "expected_record_count",
    "final_break_counts",
    "geometric_limit",
    "joint_tail_prob",
    "joint_tail_prob_fast",
    "new_stack",
    "oracle_joint",
    "oracle_pmf_b",
    "oracle_pmf_r",
    "oracle_single_break_profile",
    "p_term",
    "prob_b0",
    "prob_b1",
    "prob_b1_lastrecord",
    "record_counts",
    "records_by_scan",
    "remainder_bound",
    "run_trajectory",
    "simulate_b",
    "simulate_b_checkpoints",
    "simulate_r",
    "simulate_trajectory_audit",
    "single_break_term",
    "step",
    "telescoping_sum",
    "trial_values",
    "__version__",
]
