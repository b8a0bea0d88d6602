"""Shared fixtures. The long closed-loop runs are session-scoped because
they are deterministic and several test modules assert against the same
trajectories."""

import math

import pytest

from wmr_pendulum import FullVelocityState, Gains, Params, Scenario, simulate


def pytest_terminal_summary(terminalreporter):
    # Re-emit the acceptance checklist after the captured test output, one
    # line per criterion, so it survives pytest's stdout capture.
    try:
        import test_acceptance
    except ImportError:
        return
    lines = getattr(test_acceptance, "REPORT", [])
    if lines:
        terminalreporter.write_sep("-", "acceptance checklist")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def params():
    return Params(M=1.0, m=0.1, J=0.01, l=1.0, g=9.81)


@pytest.fixture(scope="session")
def sec4_gains():
    return Gains(k_E=1.0, k_p=0.16, k_v=0.8, k_psi=1.0, k_psi_dot=2.0)


@pytest.fixture(scope="session")
def sec4_initial():
    return FullVelocityState(
        x=20.0, y=30.0, psi=math.pi, theta=math.pi / 4,
        x_dot=0.5, y_dot=0.0, psi_dot=-1.5, theta_dot=0.0,
    )


@pytest.fixture(scope="session")
def sec4_trajectory(params, sec4_gains, sec4_initial):
    return simulate(Scenario(params=params, gains=sec4_gains, initial=sec4_initial))


@pytest.fixture(scope="session")
def heading_trajectory(params, sec4_initial):
    # Swing-up disabled: the heading loop works against a pendulum that
    # is left to do whatever the cart PD makes it do.
    gains = Gains(k_E=0.0, k_p=0.16, k_v=0.8, k_psi=1.0, k_psi_dot=2.0)
    return simulate(Scenario(params=params, gains=gains, initial=sec4_initial))


@pytest.fixture(scope="session")
def swingup_scenario(params):
    gains = Gains(k_E=1.0, k_p=0.0, k_v=0.0, k_psi=1.0, k_psi_dot=2.0)
    initial = FullVelocityState(0.0, 0.0, 0.0, math.pi / 4, 0.0, 0.0, 0.0, 0.0)
    return Scenario(params=params, gains=gains, initial=initial, t_final=30.0)


@pytest.fixture(scope="session")
def swingup_trajectory(swingup_scenario):
    return simulate(swingup_scenario)


@pytest.fixture(scope="session")
def swingup_printed_trajectory(swingup_scenario):
    import dataclasses

    return simulate(dataclasses.replace(swingup_scenario, eq24_printed_form=True))
