"""Exception types shared across the package."""


class DataError(ValueError):
    """Input data is unusable (too short, non-finite, unparseable)."""


class ThresholdError(DataError):
    """The order statistic used as threshold is not strictly positive."""

    def __init__(self, k, threshold):
        self.k = k
        self.threshold = threshold
        super().__init__(
            f"threshold order statistic at k={k} is {threshold!r}; "
            "must be > 0 to take logarithms"
        )


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach the requested accuracy."""

    def __init__(self, message, achieved_error):
        self.achieved_error = achieved_error
        super().__init__(f"{message} (achieved error estimate {achieved_error:.3e})")
