"""After-the-fact checks on recorded trajectories.

Time derivatives are taken by finite differences on the stored samples,
not from the model equations, so every residual here checks what the
integrator actually produced. The interior stencil is fourth order to
keep differentiation error well below integrator error at dt = 1e-3;
the four boundary samples fall back to second order and carry visibly
more dust.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NeverConverged, ValidationError, WrongMode
from .sim import Trajectory


def time_derivative(values, dt: float) -> np.ndarray:
    """Differentiate a uniformly sampled signal.

    Fourth-order central stencil on the interior, second-order central
    at the second and second-to-last samples, second-order one-sided at
    the ends. Falls back to numpy.gradient below five samples.
    """
    if not (math.isfinite(dt) and dt > 0.0):
        raise ValidationError(f"dt must be positive, got {dt}")
    f = np.asarray(values, dtype=float)
    if f.ndim != 1 or len(f) < 2:
        raise ValidationError("need a 1-D signal with at least two samples")
    if len(f) < 5:
        return np.gradient(f, dt)
    out = np.empty_like(f)
    out[2:-2] = (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / (12.0 * dt)
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt)
    out[1] = (f[2] - f[0]) / (2.0 * dt)
    out[-2] = (f[-1] - f[-3]) / (2.0 * dt)
    out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dt)
    return out


def _dt(tr: Trajectory) -> float:
    return tr.scenario.dt


def energy_law_residual(tr: Trajectory) -> np.ndarray:
    """Residual of the swing-energy decay law.

    With the cart PD off, the closed loop must satisfy
    dE/dt = -m l k_E E theta_dot^2 cos^2(theta); the residual is the
    finite-difference dE/dt minus that right-hand side. Raises WrongMode
    when k_p or k_v is nonzero, because then the force includes terms
    the law does not account for.
    """
    g = tr.scenario.gains
    p = tr.scenario.params
    if g.k_p != 0.0 or g.k_v != 0.0:
        raise WrongMode(
            f"energy law requires k_p = k_v = 0, got k_p={g.k_p}, k_v={g.k_v}"
        )
    decay = -p.m * p.l * g.k_E * tr.E * tr.theta_dot**2 * np.cos(tr.theta) ** 2
    return time_derivative(tr.E, _dt(tr)) - decay


def power_balance_residual(tr: Trajectory) -> np.ndarray:
    """Finite-difference d(E_total)/dt minus the injected power F v + tau psi_dot."""
    return time_derivative(tr.E_total, _dt(tr)) - (tr.F * tr.v + tr.tau * tr.psi_dot)


def collinearity_residual(tr: Trajectory) -> np.ndarray:
    """Cross product x_dot*y - y_dot*x; zero when velocity points along the position ray."""
    x_dot = tr.v * np.cos(tr.psi)
    y_dot = tr.v * np.sin(tr.psi)
    return x_dot * tr.y - y_dot * tr.x


def constraint_residual(tr: Trajectory) -> np.ndarray:
    """No-side-slip residual of the reconstructed Cartesian velocity.

    Factored as v*(cos*sin - sin*cos): IEEE multiplication commutes, so
    the cancellation is exact and any nonzero entry means the recorded
    columns were not produced by this reconstruction.
    """
    cp = np.cos(tr.psi)
    sp = np.sin(tr.psi)
    return tr.v * (cp * sp - sp * cp)


def steady_state_cartpole_residual(
    tr: Trajectory, e_psi_tol: float = 0.01, min_tail: float = 1.0
) -> tuple:
    """Straight-line cart-pole residual on the heading-converged tail.

    Once the heading error has settled (|e_psi| < e_psi_tol through the
    end of the run, for at least min_tail seconds), the planar motion
    collapses onto the line of sight and the closed loop must satisfy
    the one-dimensional cart-pole relation

        (x_dd + k_v x_d + k_p x) * sqrt(tan(psi)^2 + 1)
            + E theta_dot cos(theta) / (M + m sin(theta)^2) = 0.

    Returns (t_tail, residual_tail). Raises NeverConverged when no such
    tail exists.
    """
    g = tr.scenario.gains
    p = tr.scenario.params
    bad = np.nonzero(np.abs(tr.e_psi) >= e_psi_tol)[0]
    k_star = 0 if len(bad) == 0 else int(bad[-1]) + 1
    if k_star >= len(tr) or tr.t[-1] - tr.t[k_star] < min_tail:
        raise NeverConverged(
            f"no tail with |e_psi| < {e_psi_tol} sustained for {min_tail} s"
        )
    x_dot = tr.v * np.cos(tr.psi)
    x_ddot = time_derivative(x_dot, _dt(tr))
    slope = np.tan(tr.psi)
    st = np.sin(tr.theta)
    residual = (x_ddot + g.k_v * x_dot + g.k_p * tr.x) * np.sqrt(slope**2 + 1.0) + (
        tr.E * tr.theta_dot * np.cos(tr.theta)
    ) / (p.M + p.m * st * st)
    return (tr.t[k_star:], residual[k_star:])


def lyapunov_traces(tr: Trajectory) -> tuple:
    """Recompute (V_E, V_psi) from the recorded errors.

    V_E = E^2/2 certifies the swing-energy loop; V_psi is the weighted
    heading error energy. Both are recomputed here rather than read back
    from the trajectory columns so the stored values can be audited.
    """
    g = tr.scenario.gains
    v_e = 0.5 * tr.E**2
    v_psi = 0.5 * g.k_psi * tr.e_psi**2 + 0.5 * g.k_psi_dot * tr.e_psi_dot**2
    return (v_e, v_psi)


def step_increases(values) -> np.ndarray:
    """Positive sample-to-sample increments; zero where nonincreasing."""
    return np.maximum(np.diff(np.asarray(values, dtype=float)), 0.0)


@dataclass
class ResidualReport:
    """Every per-sample check in one place, with max magnitudes.

    energy_law and cartpole_tail are None when their preconditions do
    not hold (PD gains active, or no heading-converged tail).
    """

    power_balance: np.ndarray
    collinearity: np.ndarray
    constraint: np.ndarray
    v_e_steps: np.ndarray
    v_psi_steps: np.ndarray
    energy_law: np.ndarray | None
    cartpole_tail_t: np.ndarray | None
    cartpole_tail: np.ndarray | None

    @property
    def power_balance_max(self) -> float:
        return float(np.max(np.abs(self.power_balance)))

    @property
    def collinearity_max(self) -> float:
        return float(np.max(np.abs(self.collinearity)))

    @property
    def constraint_max(self) -> float:
        return float(np.max(np.abs(self.constraint)))

    @property
    def v_e_step_max(self) -> float:
        return float(np.max(self.v_e_steps, initial=0.0))

    @property
    def v_psi_step_max(self) -> float:
        return float(np.max(self.v_psi_steps, initial=0.0))

    @property
    def energy_law_max(self):
        if self.energy_law is None:
            return None
        return float(np.max(np.abs(self.energy_law)))

    @property
    def cartpole_tail_max(self):
        if self.cartpole_tail is None:
            return None
        return float(np.max(np.abs(self.cartpole_tail)))

    @classmethod
    def from_trajectory(cls, tr: Trajectory) -> "ResidualReport":
        g = tr.scenario.gains
        v_e, v_psi = lyapunov_traces(tr)
        energy_law = None
        if g.k_p == 0.0 and g.k_v == 0.0:
            energy_law = energy_law_residual(tr)
        try:
            tail_t, tail_r = steady_state_cartpole_residual(tr)
        except NeverConverged:
            tail_t, tail_r = None, None
        return cls(
            power_balance=power_balance_residual(tr),
            collinearity=collinearity_residual(tr),
            constraint=constraint_residual(tr),
            v_e_steps=step_increases(v_e),
            v_psi_steps=step_increases(v_psi),
            energy_law=energy_law,
            cartpole_tail_t=tail_t,
            cartpole_tail=tail_r,
        )
