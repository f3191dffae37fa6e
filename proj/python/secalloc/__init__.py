"""Security-task allocation and schedulability analysis for partitioned
fixed-priority multicore real-time systems.

Times are integer microseconds; exact rationals cross the boundary as
`fractions.Fraction`. See the project README for the file formats and the
command-line interface.
"""

from ._core import (  # noqa: F401
    Allocation,
    AllocationOutcome,
    AttackEvent,
    DetectionSample,
    GenParams,
    PeriodSolution,
    Platform,
    RealTimeTask,
    SecurityTask,
    SimTrace,
    SweepEntry,
    SystemConfig,
    Violation,
    assign_rm_priorities,
    assign_security_priorities,
    best_fit_partition,
    config_from_json,
    config_to_json,
    cumulative_tightness,
    dbf,
    default_gen_params,
    delta_eta,
    detection_latency,
    empirical_cdf,
    exhaustive_optimal,
    generate_taskset,
    hydra_allocate,
    inject_attacks,
    interference,
    mean_detection_improvement,
    necessary_condition,
    objective_value,
    optimize_period,
    randfixedsum,
    rt_response_time,
    security_schedulable,
    simulate,
    single_core_allocate,
    sweep_params,
    tightness,
    validate_config,
)

__version__ = "0.1.0"
