"""Fixed-step closed-loop simulation.

Classical fourth-order Runge-Kutta with a fixed step keeps runs exactly
reproducible: no adaptive step logic, no tolerance knobs, identical
float sequences on every invocation. Time is indexed, t_k = k*dt, so
the grid never accumulates rounding drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import control, dynamics
from .errors import NonFiniteInput, NonFiniteState, ValidationError
from .model import FullVelocityState, Gains, Params, ReducedState, full_to_reduced, wrap_angle

# A state component this large is treated as divergence; honest runs of
# this system stay within a few hundred units in every coordinate.
DIVERGENCE_LIMIT = 1e9

_GRID_TOL = 1e-9


@dataclass(frozen=True)
class Scenario:
    """Everything one closed-loop run depends on."""

    params: Params
    gains: Gains
    initial: FullVelocityState
    dt: float = 1e-3
    t_final: float = 60.0
    control_mode: str = "continuous"
    sample_period: float | None = None
    eq24_printed_form: bool = False
    constraint_tol: float = 1e-9

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValidationError(f"Scenario.dt must be a positive finite number, got {self.dt}")
        if not (math.isfinite(self.t_final) and self.t_final >= self.dt):
            raise ValidationError(
                f"Scenario.t_final must be >= dt, got t_final={self.t_final}, dt={self.dt}"
            )
        n = round(self.t_final / self.dt)
        if abs(n * self.dt - self.t_final) > _GRID_TOL * max(1.0, abs(self.t_final)):
            raise ValidationError(
                f"t_final={self.t_final} is not an integer multiple of dt={self.dt}"
            )
        if self.control_mode not in ("continuous", "sampled"):
            raise ValidationError(
                f"control_mode must be 'continuous' or 'sampled', got {self.control_mode!r}"
            )
        if self.control_mode == "sampled":
            period = self.dt if self.sample_period is None else self.sample_period
            if not (math.isfinite(period) and period > 0.0):
                raise ValidationError(f"sample_period must be positive, got {period}")
            stride = round(period / self.dt)
            if stride < 1 or abs(stride * self.dt - period) > _GRID_TOL * max(1.0, period):
                raise ValidationError(
                    f"sample_period={period} is not an integer multiple of dt={self.dt}"
                )
        elif self.sample_period is not None:
            raise ValidationError("sample_period is only meaningful with control_mode='sampled'")
        control.check_cart_damping(self.gains, self.params)

    @property
    def n_steps(self) -> int:
        return round(self.t_final / self.dt)

    @property
    def stride(self) -> int:
        if self.control_mode != "sampled":
            return 1
        period = self.dt if self.sample_period is None else self.sample_period
        return round(period / self.dt)


@dataclass
class Trajectory:
    """Sampled closed-loop run: one row per grid time t_k = k*dt.

    F and tau are the inputs actually applied over [t_k, t_{k+1}); in
    sampled mode they are the held values, not a fresh evaluation.
    """

    scenario: Scenario
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    psi: np.ndarray
    theta: np.ndarray
    v: np.ndarray
    psi_dot: np.ndarray
    theta_dot: np.ndarray
    F: np.ndarray
    tau: np.ndarray
    E: np.ndarray
    E_total: np.ndarray
    V_E: np.ndarray
    V_psi: np.ndarray
    psi_d: np.ndarray
    psi_d_dot: np.ndarray
    psi_d_ddot: np.ndarray
    e_psi: np.ndarray
    e_psi_dot: np.ndarray
    e_v: np.ndarray
    e_p: np.ndarray
    lam: np.ndarray

    # CSV schema: column name -> attribute, in file order.
    CSV_COLUMNS = (
        ("t", "t"),
        ("x", "x"),
        ("y", "y"),
        ("psi", "psi"),
        ("theta", "theta"),
        ("v", "v"),
        ("psi_dot", "psi_dot"),
        ("theta_dot", "theta_dot"),
        ("F", "F"),
        ("tau", "tau"),
        ("E", "E"),
        ("E_total", "E_total"),
        ("V_E", "V_E"),
        ("V_psi", "V_psi"),
        ("psi_d", "psi_d"),
        ("e_psi", "e_psi"),
        ("e_v", "e_v"),
        ("e_p", "e_p"),
        ("lambda", "lam"),
    )

    def __len__(self) -> int:
        return len(self.t)

    def state_at(self, k: int) -> ReducedState:
        return ReducedState(
            float(self.x[k]),
            float(self.y[k]),
            float(self.psi[k]),
            float(self.theta[k]),
            float(self.v[k]),
            float(self.psi_dot[k]),
            float(self.theta_dot[k]),
        )


@dataclass(frozen=True)
class Event:
    """A named instant detected in a finished trajectory."""

    name: str
    t: float


def rk4_step(f, y, t: float, dt: float):
    """One classical Runge-Kutta step of y' = f(t, y).

    y is any sequence of floats; a list of the same length is returned.
    Raises NonFiniteState when the update leaves the trusted region
    (non-finite or beyond DIVERGENCE_LIMIT in any component).
    """
    half = 0.5 * dt
    k1 = f(t, y)
    k2 = f(t + half, [yi + half * ki for yi, ki in zip(y, k1)])
    k3 = f(t + half, [yi + half * ki for yi, ki in zip(y, k2)])
    k4 = f(t + dt, [yi + dt * ki for yi, ki in zip(y, k3)])
    sixth = dt / 6.0
    out = [
        yi + sixth * (a + 2.0 * (b + c) + d)
        for yi, a, b, c, d in zip(y, k1, k2, k3, k4)
    ]
    for component in out:
        if not math.isfinite(component) or abs(component) > DIVERGENCE_LIMIT:
            raise NonFiniteState(f"state left the trusted region at t={t + dt:.6g}")
    return out


def simulate(sc: Scenario) -> Trajectory:
    """Run the closed loop over the full horizon and record every sample."""
    p = sc.params
    g = sc.gains
    s0 = full_to_reduced(sc.initial, sc.constraint_tol)
    n = sc.n_steps
    stride = sc.stride
    printed = sc.eq24_printed_form

    if s0.x * s0.x + s0.y * s0.y > g.eps_origin * g.eps_origin:
        ctx = control.HeadingContext(math.atan2(s0.y, s0.x))
    else:
        ctx = control.HeadingContext(s0.psi)

    M, m, J, l, grav = p.M, p.m, p.J, p.l, p.g
    forces = control._forces_core
    derivative = dynamics._derivative_core

    held = [0.0, 0.0]

    if sc.control_mode == "continuous":

        def f(t, y):
            F, tau = forces(y, p, g, ctx, printed)[:2]
            return derivative(y, F, tau, M, m, J, l, grav)

    else:

        def f(t, y):
            return derivative(y, held[0], held[1], M, m, J, l, grav)

    cols = {
        name: np.empty(n + 1)
        for name in (
            "x", "y", "psi", "theta", "v", "psi_dot", "theta_dot",
            "F", "tau", "E", "E_total", "V_E", "V_psi",
            "psi_d", "psi_d_dot", "psi_d_ddot", "e_psi", "e_psi_dot",
            "e_v", "e_p", "lam",
        )
    }

    y = list(s0.as_tuple())
    dt = sc.dt
    for k in range(n + 1):
        core = forces(y, p, g, ctx, printed)
        if sc.control_mode == "sampled":
            if k % stride == 0:
                held[0] = core[0]
                held[1] = core[1]
            F_applied, tau_applied = held[0], held[1]
        else:
            F_applied, tau_applied = core[0], core[1]
        diag = control._diagnostics_from_core(y, core, F_applied, tau_applied, p, g)
        s_k = ReducedState(*y)
        for name, value in (
            ("x", y[0]), ("y", y[1]), ("psi", y[2]), ("theta", y[3]),
            ("v", y[4]), ("psi_dot", y[5]), ("theta_dot", y[6]),
            ("F", F_applied), ("tau", tau_applied),
            ("E", diag.E), ("E_total", dynamics.total_energy(s_k, p)),
            ("V_E", diag.V_E), ("V_psi", diag.V_psi),
            ("psi_d", diag.psi_d), ("psi_d_dot", diag.psi_d_dot),
            ("psi_d_ddot", diag.psi_d_ddot),
            ("e_psi", diag.e_psi), ("e_psi_dot", diag.e_psi_dot),
            ("e_v", diag.e_v), ("e_p", diag.e_p),
            ("lam", dynamics.lambda_force(s_k, p)),
        ):
            cols[name][k] = value
        if k == n:
            break
        try:
            y = rk4_step(f, y, k * dt, dt)
        except NonFiniteInput as exc:
            raise NonFiniteState(
                f"dynamics evaluation failed between t={k * dt:.6g} and t={(k + 1) * dt:.6g}"
            ) from exc

    t = np.arange(n + 1) * dt
    return Trajectory(scenario=sc, t=t, **cols)


def detect_events(
    tr: Trajectory,
    tol_E: float = 0.01,
    tol_upright: float = 0.05,
    origin_radius: float = 0.01,
) -> list:
    """Scan a finished trajectory for the three interesting instants.

    energy-captured : first time from which |E| stays below tol_E for
                      the remainder of the run
    near-upright    : each entry of |theta mod 2pi| below tol_upright
    origin-reached  : first time the base comes within origin_radius
    """
    events = []

    abs_E = np.abs(tr.E)
    above = np.nonzero(abs_E >= tol_E)[0]
    k_capture = 0 if len(above) == 0 else int(above[-1]) + 1
    if k_capture < len(tr):
        events.append(Event("energy-captured", float(tr.t[k_capture])))

    upright = np.abs([wrap_angle(a) for a in tr.theta]) < tol_upright
    for k in range(len(tr)):
        if upright[k] and (k == 0 or not upright[k - 1]):
            events.append(Event("near-upright", float(tr.t[k])))

    near_origin = np.hypot(tr.x, tr.y) < origin_radius
    hits = np.nonzero(near_origin)[0]
    if len(hits) > 0:
        events.append(Event("origin-reached", float(tr.t[int(hits[0])])))

    events.sort(key=lambda e: (e.t, e.name))
    return events
