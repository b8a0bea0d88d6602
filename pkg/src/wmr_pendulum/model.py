"""Domain types and coordinate conversions.

The robot is a differential-drive base carrying an inverted pendulum.
Its configuration is tracked in a reduced set of coordinates where the
no-side-slip condition of the wheels holds by construction: instead of
(x_dot, y_dot) the state carries the single forward speed v along the
heading. Angles are stored unwrapped; wrapping happens only where a
bounded error is required.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConstraintViolation, ValidationError

TWO_PI = 2.0 * math.pi


def _require_finite(obj, names):
    for name in names:
        value = getattr(obj, name)
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ValidationError(f"{type(obj).__name__}.{name} must be a number, got {value!r}")
        if not math.isfinite(value):
            raise ValidationError(f"{type(obj).__name__}.{name} must be finite, got {value!r}")
        object.__setattr__(obj, name, float(value))


def wrap_angle(angle: float) -> float:
    """Wrap an angle into (-pi, pi], with the boundary mapping to +pi."""
    return math.pi - (math.pi - angle) % TWO_PI


@dataclass(frozen=True)
class Params:
    """Physical constants of the robot-pendulum assembly.

    M : mass of the wheeled base, kg
    m : pendulum bob mass, kg
    J : yaw moment of inertia of the base about its vertical axis, kg m^2
    l : pendulum rod length, m
    g : gravitational acceleration, m/s^2
    d : half the wheel track, m
    R : wheel radius, m

    The bob is treated as a point mass on a massless rod pivoting at the
    midpoint of the wheel axle; d and R only enter the wheel-level
    conversions, never the rigid-body dynamics.
    """

    M: float
    m: float
    J: float
    l: float
    g: float
    d: float = 0.2
    R: float = 0.1

    def __post_init__(self):
        _require_finite(self, ("M", "m", "J", "l", "g", "d", "R"))
        for name in ("M", "m", "J", "l", "g", "d", "R"):
            if getattr(self, name) <= 0.0:
                raise ValidationError(f"Params.{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class ReducedState:
    """Constraint-respecting state: pose, tilt, and their rates.

    x, y      : axle midpoint position in the world frame, m
    psi       : heading, rad (unwrapped)
    theta     : pendulum tilt from the upright, rad (unwrapped)
    v         : forward speed along the heading, m/s
    psi_dot   : yaw rate, rad/s
    theta_dot : tilt rate, rad/s
    """

    x: float
    y: float
    psi: float
    theta: float
    v: float
    psi_dot: float
    theta_dot: float

    _FIELDS = ("x", "y", "psi", "theta", "v", "psi_dot", "theta_dot")

    def __post_init__(self):
        _require_finite(self, self._FIELDS)

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.psi, self.theta, self.v, self.psi_dot, self.theta_dot)

    @classmethod
    def from_sequence(cls, seq) -> "ReducedState":
        return cls(*seq)


@dataclass(frozen=True)
class ControlInput:
    """Generalized inputs: forward force F (N) and yaw torque tau (N m)."""

    F: float
    tau: float

    def __post_init__(self):
        _require_finite(self, ("F", "tau"))


@dataclass(frozen=True)
class FullVelocityState:
    """Pose and raw Cartesian velocities, before constraint reduction."""

    x: float
    y: float
    psi: float
    theta: float
    x_dot: float
    y_dot: float
    psi_dot: float
    theta_dot: float

    def __post_init__(self):
        _require_finite(
            self, ("x", "y", "psi", "theta", "x_dot", "y_dot", "psi_dot", "theta_dot")
        )


@dataclass(frozen=True)
class Gains:
    """Controller gains and the two controller-shape constants.

    k_E       : energy-shaping gain (>= 0; zero disables the swing-up term)
    k_p, k_v  : position and speed gains of the cart loop (>= 0)
    k_psi     : heading proportional gain (> 0)
    k_psi_dot : heading rate gain (> 0)
    eps_origin: radius below which the desired heading is frozen, m
    e_psi_wrap: interval the heading error is wrapped into; fixed
    """

    k_E: float
    k_p: float
    k_v: float
    k_psi: float
    k_psi_dot: float
    eps_origin: float = 1e-3
    e_psi_wrap: str = field(default="(-pi, pi]")

    def __post_init__(self):
        _require_finite(self, ("k_E", "k_p", "k_v", "k_psi", "k_psi_dot", "eps_origin"))
        if self.k_E < 0.0:
            raise ValidationError(f"Gains.k_E must be >= 0, got {self.k_E}")
        if self.k_p < 0.0:
            raise ValidationError(f"Gains.k_p must be >= 0, got {self.k_p}")
        if self.k_v < 0.0:
            raise ValidationError(f"Gains.k_v must be >= 0, got {self.k_v}")
        if self.k_psi <= 0.0:
            raise ValidationError(f"Gains.k_psi must be > 0, got {self.k_psi}")
        if self.k_psi_dot <= 0.0:
            raise ValidationError(f"Gains.k_psi_dot must be > 0, got {self.k_psi_dot}")
        if self.eps_origin <= 0.0:
            raise ValidationError(f"Gains.eps_origin must be > 0, got {self.eps_origin}")
        if self.e_psi_wrap != "(-pi, pi]":
            raise ValidationError(
                f"Gains.e_psi_wrap is fixed to '(-pi, pi]', got {self.e_psi_wrap!r}"
            )


def full_to_reduced(s: FullVelocityState, tol: float = 1e-9) -> ReducedState:
    """Project Cartesian velocities onto the heading, checking no-side-slip.

    The lateral component -x_dot*sin(psi) + y_dot*cos(psi) must vanish; it
    is compared against tol scaled by max(1, |x_dot|, |y_dot|) and a
    violation is rejected rather than silently projected away.
    """
    sin_psi = math.sin(s.psi)
    cos_psi = math.cos(s.psi)
    lateral = -s.x_dot * sin_psi + s.y_dot * cos_psi
    scale = max(1.0, abs(s.x_dot), abs(s.y_dot))
    if abs(lateral) > tol * scale:
        raise ConstraintViolation(
            f"lateral velocity {lateral:.3e} exceeds tolerance {tol * scale:.3e} "
            f"(psi={s.psi}, x_dot={s.x_dot}, y_dot={s.y_dot})"
        )
    v = s.x_dot * cos_psi + s.y_dot * sin_psi
    return ReducedState(s.x, s.y, s.psi, s.theta, v, s.psi_dot, s.theta_dot)


def reduced_to_cartesian_velocity(s: ReducedState) -> tuple:
    """Recover (x_dot, y_dot) = v * (cos psi, sin psi)."""
    return (s.v * math.cos(s.psi), s.v * math.sin(s.psi))


def wheel_rates(s: ReducedState, p: Params) -> tuple:
    """Wheel spin rates (right, left) implied by v and psi_dot, rad/s."""
    return ((s.v + p.d * s.psi_dot) / p.R, (s.v - p.d * s.psi_dot) / p.R)


def wheel_torques(u: ControlInput, p: Params) -> tuple:
    """Split (F, tau) into per-wheel torques (left, right).

    Diagnostic only: the returned pair reproduces F = (tau_l + tau_r)/(2d)
    and tau = tau_r - tau_l, the convention the generalized inputs were
    written in. It is not a wheel-motor model.
    """
    return (p.d * u.F - 0.5 * u.tau, p.d * u.F + 0.5 * u.tau)
