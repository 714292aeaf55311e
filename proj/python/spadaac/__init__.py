"""Photon-counting SPAD receiver model with automatic attenuation control.

Thin wrapper around the compiled extension; everything is implemented in C++.
"""

from ._core import (  # noqa: F401
    AacAlgorithm,
    AacSolution,
    ChannelEstimate,
    Constellation,
    CountModel,
    DecisionRule,
    EmpiricalCounts,
    EmpiricalSer,
    RateReport,
    ReceiverConfig,
    SerReport,
    SimulationMode,
    SimulationPlan,
    SolverSettings,
    SpadaacError,
    __version__,
    achievable_rate,
    attenuation_from_targets,
    average_trigger_probability,
    count_pmf,
    gates_per_pixel,
    k_max,
    ml_thresholds,
    rate_report,
    rate_second_derivative,
    simulate_counts,
    simulate_ser,
    solve_rate_max,
    solve_trigger_criterion,
    square_root_constellation,
    symbol_error_rate,
    trigger_probability,
)
