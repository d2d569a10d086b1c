"""Traveling-wave solver for ignition-interface combustion fronts with
fractional reaction order.

The solve stack: the stable manifold of the planar phase field encodes the
reactant profile; bisection on the initial-condition defect selects the wave
speed for a given interface concentration; the settling-time integral places
the trailing interface; an outer bracketed root on the ignition-temperature
defect closes the coupled system; profile reconstruction and a diagnostic
battery of proven identities and bounds finish the job.
"""

from .model import (
    Bracket,
    BracketError,
    ConvergenceError,
    DomainError,
    FlamewaveError,
    IntegrationError,
    PhaseState,
    PhysicalParams,
    SolverConfig,
    envelope_crossing_x,
    envelope_lower,
    envelope_upper,
    extended_field,
    phase_field,
    speed_brackets,
    v0_interval,
)
from .manifold import (
    ManifoldCurve,
    eval_manifold,
    grow_manifold,
    manifold_seed,
    sample_phase_portrait,
)
from .speed import SpeedResult, solve_speed, speed_defect
from .settling import (
    SettlingResult,
    TrailingInterface,
    interface_bounds,
    settling_bounds,
    settling_time,
    trailing_interface,
)
from .fixedpoint import (
    ClosureBranch,
    ClosureResult,
    WaveIntegrals,
    clamp_to_interval,
    closure_residual_grad,
    closure_residual_val,
    fixed_point_map,
    solve_wave,
    wave_integrals,
)
from .profiles import (
    Profile,
    WaveSolution,
    build_u_profile,
    build_v_profile,
    build_wave,
    extend_full_line,
)
from .limits import (
    LambdaZeroWave,
    LimitCase,
    LimitKind,
    SweepRow,
    lambda_zero_solution,
    lambda_zero_speed_defect,
    speed_alpha_one,
    speed_alpha_zero,
    sweep_alpha,
    theta_of_speed_half_order,
)
from .diagnostics import Check, DiagnosticsReport, run_diagnostics
from .oracle import (
    OracleResult,
    ShotResult,
    grid_search_closure,
    oracle_speed,
    shoot_time_domain,
)

__version__ = "0.1.0"

__all__ = [
    "Bracket",
    "BracketError",
    "Check",
    "ClosureBranch",
    "ClosureResult",
    "ConvergenceError",
    "DiagnosticsReport",
    "DomainError",
    "FlamewaveError",
    "IntegrationError",
    "LambdaZeroWave",
    "LimitCase",
    "LimitKind",
    "ManifoldCurve",
    "OracleResult",
    "PhaseState",
    "PhysicalParams",
    "Profile",
    "SettlingResult",
    "ShotResult",
    "SolverConfig",
    "SpeedResult",
    "SweepRow",
    "TrailingInterface",
    "WaveIntegrals",
    "WaveSolution",
    "build_u_profile",
    "build_v_profile",
    "build_wave",
    "clamp_to_interval",
    "closure_residual_grad",
    "closure_residual_val",
    "envelope_crossing_x",
    "envelope_lower",
    "envelope_upper",
    "eval_manifold",
    "extend_full_line",
    "extended_field",
    "fixed_point_map",
    "grid_search_closure",
    "grow_manifold",
    "interface_bounds",
    "lambda_zero_solution",
    "lambda_zero_speed_defect",
    "manifold_seed",
    "oracle_speed",
    "phase_field",
    "run_diagnostics",
    "sample_phase_portrait",
    "settling_bounds",
    "settling_time",
    "shoot_time_domain",
    "solve_speed",
    "solve_wave",
    "speed_alpha_one",
    "speed_alpha_zero",
    "speed_brackets",
    "speed_defect",
    "sweep_alpha",
    "theta_of_speed_half_order",
    "trailing_interface",
    "v0_interval",
    "wave_integrals",
]
