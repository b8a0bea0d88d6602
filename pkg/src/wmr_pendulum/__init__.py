"""Inverted pendulum on a differential-drive robot: model, control, simulation."""

from .control import (
    ControlDiagnostics,
    HeadingContext,
    UnderdampedGainsWarning,
    cart_feedforward,
    check_cart_damping,
    control_law,
    desired_accel,
    desired_heading_rates,
    forward_force,
    heading_error,
    heading_torque,
    regulation_errors,
    swing_up_energy,
)
from .dynamics import (
    Accelerations,
    accelerations,
    lambda_force,
    state_derivative,
    total_energy,
)
from .errors import (
    ConstraintViolation,
    NeverConverged,
    NonFiniteInput,
    NonFiniteState,
    OriginSingularity,
    ParseError,
    ValidationError,
    WmrPendulumError,
    WrongMode,
)
from .model import (
    ControlInput,
    FullVelocityState,
    Gains,
    Params,
    ReducedState,
    full_to_reduced,
    reduced_to_cartesian_velocity,
    wheel_rates,
    wheel_torques,
    wrap_angle,
)
from .sim import (
    DIVERGENCE_LIMIT,
    Event,
    Scenario,
    Trajectory,
    detect_events,
    rk4_step,
    simulate,
)
from .diagnostics import (
    ResidualReport,
    collinearity_residual,
    constraint_residual,
    energy_law_residual,
    lyapunov_traces,
    power_balance_residual,
    steady_state_cartpole_residual,
    step_increases,
    time_derivative,
)

__version__ = "0.1.0"
