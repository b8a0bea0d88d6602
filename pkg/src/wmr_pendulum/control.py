"""Swing-up and stabilization law.

The controller splits into two loops that share no gains:

* a cart loop shaping the pendulum swing energy toward zero (upright)
  while damping forward speed and the along-heading position error, and
* a heading loop steering the base toward the line of sight to the
  origin, so that forward braking also shrinks the distance to it.

Both loops cancel the configuration-dependent inertia first and then
apply plain PD/energy terms, so closed-loop behavior is gain-readable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .dynamics import _accel_core
from .errors import OriginSingularity
from .model import ControlInput, Gains, Params, ReducedState, wrap_angle


class UnderdampedGainsWarning(UserWarning):
    """Cart PD pair leaves the straight-line position loop underdamped."""


@dataclass(frozen=True)
class ControlDiagnostics:
    """Intermediate controller quantities recorded alongside (F, tau)."""

    E: float
    a_d: float
    nu1: float
    e_v: float
    e_p: float
    psi_d: float
    psi_d_dot: float
    psi_d_ddot: float
    e_psi: float
    e_psi_dot: float
    V_E: float
    V_psi: float


class HeadingContext:
    """Per-run memory for the desired heading.

    Inside a disk of radius eps_origin the line-of-sight angle is
    undefined, so the last value computed outside the disk is held. A
    fresh context must be seeded with the value to hold if the run
    starts inside the disk (the initial heading is the natural choice).
    """

    __slots__ = ("psi_d",)

    def __init__(self, initial_psi_d: float = 0.0):
        self.psi_d = initial_psi_d

    def desired_heading(self, x: float, y: float, eps_origin: float) -> float:
        if x * x + y * y > eps_origin * eps_origin:
            self.psi_d = math.atan2(y, x)
        return self.psi_d


def swing_up_energy(s: ReducedState, p: Params) -> float:
    """Pendulum swing energy, zero at the upright and negative below it."""
    return 0.5 * p.m * p.l * p.l * s.theta_dot * s.theta_dot + p.m * p.g * p.l * (
        math.cos(s.theta) - 1.0
    )


def desired_accel(s: ReducedState, p: Params, k_E: float, printed_form: bool = False) -> float:
    """Forward acceleration demanded by the energy-shaping loop.

    The first term cancels the centripetal coupling the yaw rate injects
    into the tilt equation; the second drains swing energy. Its sign is
    fixed by requiring d/dt(E^2/2) = -m l k_E (E theta_dot cos theta)^2
    along the closed loop. printed_form=True selects a historical
    variant of this expression kept only for comparison runs; it does
    not decay E and must never be used for control.
    """
    st = math.sin(s.theta)
    ct = math.cos(s.theta)
    E = swing_up_energy(s, p)
    if printed_form:
        return p.l * s.psi_dot * s.psi_dot * st * ct - k_E * E * s.theta_dot * ct
    return p.l * s.psi_dot * s.psi_dot * st + k_E * E * s.theta_dot * ct


def cart_feedforward(s: ReducedState, p: Params) -> float:
    """Gravity, centripetal, and rate terms the cart force must cancel."""
    st = math.sin(s.theta)
    ct = math.cos(s.theta)
    return (
        p.m * p.g * st * ct
        + p.m * p.l * s.psi_dot * s.psi_dot * st * ct * ct
        - p.m * p.l * s.theta_dot * s.theta_dot * st
    )


def regulation_errors(s: ReducedState) -> tuple:
    """Speed error e_v = v and along-heading position error e_p.

    e_p projects the position onto the heading axis; with the heading
    loop aligned to the line of sight, e_p is (up to sign) the distance
    to the origin.
    """
    return (s.v, s.x * math.cos(s.psi) + s.y * math.sin(s.psi))


def forward_force(s: ReducedState, p: Params, gains: Gains, printed_form: bool = False) -> float:
    """Cart force: inertia-scaled energy shaping plus feedforward and PD."""
    st = math.sin(s.theta)
    a_d = desired_accel(s, p, gains.k_E, printed_form)
    e_v, e_p = regulation_errors(s)
    return (
        (p.M + p.m * st * st) * a_d
        + cart_feedforward(s, p)
        - gains.k_v * e_v
        - gains.k_p * e_p
    )


def heading_error(psi: float, psi_d: float) -> float:
    """Heading error wrapped into (-pi, pi]."""
    return wrap_angle(psi - psi_d)


def desired_heading_rates(
    x: float,
    y: float,
    x_dot: float,
    y_dot: float,
    x_ddot: float,
    y_ddot: float,
    eps_origin: float = 1e-3,
) -> tuple:
    """First and second time derivatives of the line-of-sight angle.

    Raises OriginSingularity inside the eps_origin disk, where the
    quotients below lose meaning; callers that tolerate the disk must
    branch before calling (the simulation reports both rates as zero
    while the desired heading is frozen).
    """
    r2 = x * x + y * y
    if r2 <= eps_origin * eps_origin:
        raise OriginSingularity(f"|({x}, {y})| <= eps_origin={eps_origin}")
    cross = x * y_dot - y * x_dot
    psi_d_dot = cross / r2
    psi_d_ddot = ((x * y_ddot - y * x_ddot) * r2 - cross * (2.0 * x * x_dot + 2.0 * y * y_dot)) / (
        r2 * r2
    )
    return (psi_d_dot, psi_d_ddot)


def heading_torque(
    s: ReducedState, p: Params, gains: Gains, e_psi: float, e_psi_dot: float
) -> float:
    """Yaw torque: tilt-coupling feedforward plus inertia-scaled PD."""
    st = math.sin(s.theta)
    ml2 = p.m * p.l * p.l
    return ml2 * s.theta_dot * s.psi_dot * math.sin(2.0 * s.theta) + (p.J + ml2 * st * st) * (
        -gains.k_psi * e_psi - gains.k_psi_dot * e_psi_dot
    )


def check_cart_damping(gains: Gains, p: Params) -> bool:
    """Warn (never reject) when the cart PD pair is underdamped.

    On the straight-line residual cart loop the effective mass is M, so
    critical damping sits at k_v^2 = 4 M k_p. Below that the position
    transient overshoots, which is usually a sign the two gains were
    swapped.
    """
    if gains.k_v * gains.k_v < 4.0 * p.M * gains.k_p:
        warnings.warn(
            f"cart gains underdamped: k_v^2 = {gains.k_v * gains.k_v:.6g} "
            f"< 4 M k_p = {4.0 * p.M * gains.k_p:.6g}",
            UnderdampedGainsWarning,
            stacklevel=2,
        )
        return False
    return True


def _forces_core(y, p: Params, g: Gains, ctx: HeadingContext, printed: bool):
    # Flat-tuple twin of control_law, shared with the integrator so the
    # recorded samples and the stage evaluations are bit-identical.
    x, yy, psi, theta, v, psi_dot, theta_dot = y
    M = p.M
    m = p.m
    l = p.l
    st = math.sin(theta)
    ct = math.cos(theta)
    ml2 = m * l * l
    E = 0.5 * ml2 * theta_dot * theta_dot + m * p.g * l * (ct - 1.0)
    if printed:
        a_d = l * psi_dot * psi_dot * st * ct - g.k_E * E * theta_dot * ct
    else:
        a_d = l * psi_dot * psi_dot * st + g.k_E * E * theta_dot * ct
    nu1 = m * p.g * st * ct + m * l * psi_dot * psi_dot * st * ct * ct - m * l * theta_dot * theta_dot * st
    cp = math.cos(psi)
    sp = math.sin(psi)
    e_v = v
    e_p = x * cp + yy * sp
    F = (M + m * st * st) * a_d + nu1 - g.k_v * e_v - g.k_p * e_p
    psi_d = ctx.desired_heading(x, yy, g.eps_origin)
    r2 = x * x + yy * yy
    if r2 > g.eps_origin * g.eps_origin:
        psi_d_dot = (x * (v * sp) - yy * (v * cp)) / r2
    else:
        psi_d_dot = 0.0
    e_psi = wrap_angle(psi - psi_d)
    e_psi_dot = psi_dot - psi_d_dot
    tau = ml2 * theta_dot * psi_dot * math.sin(2.0 * theta) + (p.J + ml2 * st * st) * (
        -g.k_psi * e_psi - g.k_psi_dot * e_psi_dot
    )
    return (F, tau, E, a_d, nu1, e_v, e_p, psi_d, psi_d_dot, e_psi, e_psi_dot)


def _diagnostics_from_core(y, core, F_applied, tau_applied, p: Params, g: Gains):
    F, tau, E, a_d, nu1, e_v, e_p, psi_d, psi_d_dot, e_psi, e_psi_dot = core
    x, yy, psi, theta, v, psi_dot, theta_dot = y
    if x * x + yy * yy > g.eps_origin * g.eps_origin:
        # Reference yaw acceleration under the inputs actually applied.
        a_l, _, _ = _accel_core(
            theta, v, psi_dot, theta_dot, F_applied, tau_applied, p.M, p.m, p.J, p.l, p.g
        )
        cp = math.cos(psi)
        sp = math.sin(psi)
        x_dot = v * cp
        y_dot = v * sp
        x_ddot = a_l * cp - v * psi_dot * sp
        y_ddot = a_l * sp + v * psi_dot * cp
        _, psi_d_ddot = desired_heading_rates(x, yy, x_dot, y_dot, x_ddot, y_ddot, g.eps_origin)
    else:
        psi_d_ddot = 0.0
    return ControlDiagnostics(
        E=E,
        a_d=a_d,
        nu1=nu1,
        e_v=e_v,
        e_p=e_p,
        psi_d=psi_d,
        psi_d_dot=psi_d_dot,
        psi_d_ddot=psi_d_ddot,
        e_psi=e_psi,
        e_psi_dot=e_psi_dot,
        V_E=0.5 * E * E,
        V_psi=0.5 * g.k_psi * e_psi * e_psi + 0.5 * g.k_psi_dot * e_psi_dot * e_psi_dot,
    )


def control_law(
    s: ReducedState,
    p: Params,
    gains: Gains,
    ctx: HeadingContext | None = None,
    printed_form: bool = False,
) -> tuple:
    """Full control law: returns (ControlInput, ControlDiagnostics).

    ctx carries the frozen desired heading between calls of one run;
    passing None evaluates the law statelessly, seeding the context from
    the current position (or the current heading inside the freeze disk).
    """
    if ctx is None:
        if s.x * s.x + s.y * s.y > gains.eps_origin * gains.eps_origin:
            ctx = HeadingContext(math.atan2(s.y, s.x))
        else:
            ctx = HeadingContext(s.psi)
    y = s.as_tuple()
    core = _forces_core(y, p, gains, ctx, printed_form)
    u = ControlInput(core[0], core[1])
    return u, _diagnostics_from_core(y, core, core[0], core[1], p, gains)
