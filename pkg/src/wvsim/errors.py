"""Exception types shared across the package."""


class OverlapTooSmall(ValueError):
    """Pre/post-selection overlap below the configured floor.

    Signals the genuinely divergent weak-value regime (orthogonal
    selection with no measurement disturbance), as opposed to round-off.
    """


class ZeroPpsProbability(ValueError):
    """Post-selection probability underflowed to (numerically) zero."""


class NonDiagonalInput(ValueError):
    """A classical-model routine received a state with coherences."""


class InvalidDisturbance(ValueError):
    """Coin-toss disturbance delta incompatible with strength lambda."""


class QuadratureNotConverged(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""
