"""Equations of motion in the reduced coordinates.

The tilt/speed pair couples through a symmetric 2x2 mass matrix

    [M + m        m l cos(theta)] [dv/dt      ]   [F + m l theta_dot^2 sin(theta)          ]
    [m l cos      m l^2         ] [dtheta/dt^2] = [m l^2 psi_dot^2 sin cos + m g l sin(theta)]

whose determinant m l^2 (M + m sin^2 theta) is strictly positive, so the
solve is always well posed. Yaw decouples into a scalar equation with a
configuration-dependent inertia J + m l^2 sin^2(theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonFiniteInput
from .model import ControlInput, Params, ReducedState


@dataclass(frozen=True)
class Accelerations:
    """Forward, tilt, and yaw accelerations at one instant."""

    a_l: float
    theta_ddot: float
    psi_ddot: float


def _accel_core(theta, v, psi_dot, theta_dot, F, tau, M, m, J, l, g):
    # Guard the hot path: NaN/Inf propagating through the trig calls below
    # would surface as confusing downstream errors instead of a clean raise.
    if not (
        math.isfinite(theta)
        and math.isfinite(v)
        and math.isfinite(psi_dot)
        and math.isfinite(theta_dot)
        and math.isfinite(F)
        and math.isfinite(tau)
    ):
        raise NonFiniteInput(
            f"non-finite dynamics input: theta={theta}, v={v}, psi_dot={psi_dot}, "
            f"theta_dot={theta_dot}, F={F}, tau={tau}"
        )
    st = math.sin(theta)
    ct = math.cos(theta)
    ml = m * l
    ml2 = ml * l
    b1 = F + ml * theta_dot * theta_dot * st
    b2 = ml2 * psi_dot * psi_dot * st * ct + m * g * l * st
    det = ml2 * (M + m * st * st)
    a_l = (b1 * ml2 - ml * ct * b2) / det
    theta_ddot = ((M + m) * b2 - ml * ct * b1) / det
    psi_ddot = (tau - ml2 * theta_dot * psi_dot * math.sin(2.0 * theta)) / (
        J + ml2 * st * st
    )
    return a_l, theta_ddot, psi_ddot


def accelerations(s: ReducedState, u: ControlInput, p: Params) -> Accelerations:
    """Solve the coupled tilt/speed block and the yaw equation."""
    a_l, theta_ddot, psi_ddot = _accel_core(
        s.theta, s.v, s.psi_dot, s.theta_dot, u.F, u.tau, p.M, p.m, p.J, p.l, p.g
    )
    return Accelerations(a_l, theta_ddot, psi_ddot)


def _derivative_core(y, F, tau, M, m, J, l, g):
    # y = (x, y, psi, theta, v, psi_dot, theta_dot); same order on output.
    a_l, theta_ddot, psi_ddot = _accel_core(y[3], y[4], y[5], y[6], F, tau, M, m, J, l, g)
    return (
        y[4] * math.cos(y[2]),
        y[4] * math.sin(y[2]),
        y[5],
        y[6],
        a_l,
        psi_ddot,
        theta_ddot,
    )


def state_derivative(s: ReducedState, u: ControlInput, p: Params) -> tuple:
    """Time derivative of the reduced state under the inputs (F, tau).

    Returned in field order of ReducedState: (x_dot, y_dot, psi_dot,
    theta_dot, v_dot, psi_ddot, theta_ddot).
    """
    return _derivative_core(s.as_tuple(), u.F, u.tau, p.M, p.m, p.J, p.l, p.g)


def lambda_force(s: ReducedState, p: Params) -> float:
    """Lateral constraint force keeping the base from side-slipping.

    Diagnostic only; it never enters the reduced equations of motion.
    """
    return p.M * (2.0 * s.psi_dot * s.v + p.l * s.theta_dot * s.psi_dot * math.cos(s.theta))


def total_energy(s: ReducedState, p: Params) -> float:
    """Kinetic plus potential energy, zero at the upright rest state.

    The form below is the full Cartesian energy with the no-side-slip
    condition substituted; cross terms between heading and tilt cancel.
    """
    st = math.sin(s.theta)
    ct = math.cos(s.theta)
    l2 = p.l * p.l
    kinetic = (
        0.5 * (p.M + p.m) * s.v * s.v
        + 0.5 * p.J * s.psi_dot * s.psi_dot
        + 0.5
        * p.m
        * (
            l2 * s.theta_dot * s.theta_dot
            + l2 * s.psi_dot * s.psi_dot * st * st
            + 2.0 * s.v * p.l * s.theta_dot * ct
        )
    )
    return kinetic + p.m * p.g * p.l * (ct - 1.0)
