"""Exception types shared across the package."""


class WmrPendulumError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(WmrPendulumError):
    """A parameter, gain, or state value violates its documented range."""


class ParseError(WmrPendulumError):
    """A config file is malformed (syntax, unknown key, bad value token)."""


class ConstraintViolation(WmrPendulumError):
    """A Cartesian velocity has a lateral component beyond tolerance."""


class NonFiniteInput(WmrPendulumError):
    """A state or input handed to the dynamics is NaN or infinite."""


class NonFiniteState(WmrPendulumError):
    """Integration produced a non-finite or absurdly large state."""


class OriginSingularity(WmrPendulumError):
    """Desired-heading rates requested too close to the origin."""


class WrongMode(WmrPendulumError):
    """A diagnostic was applied to a trajectory outside its regime."""


class NeverConverged(WmrPendulumError):
    """A tail-based diagnostic found no converged tail in the trajectory."""
