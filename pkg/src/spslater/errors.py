"""Exception types shared across the package."""


class SPSError(Exception):
    """Base class for all package-specific errors."""


class DegenerateFiber(SPSError):
    """The fiber map has no two-root structure: g'(t*) <= 0.

    Signals that the requested mass sits at or above the admissible
    threshold c1 (the Lambda^0 barrier), so the plus/minus branch
    projections are undefined.
    """

    def __init__(self, t_star, gprime_at_tstar, message=None):
        self.t_star = t_star
        self.gprime_at_tstar = gprime_at_tstar
        super().__init__(
            message
            or f"degenerate fiber: g'(t*) = {gprime_at_tstar:.6e} at t* = {t_star:.6e}"
        )


class UnderResolved(SPSError):
    """A bubble's concentration scale is not resolved by the grid."""


class BoundaryStall(SPSError):
    """Plus-branch iterates reached the A >= k1 gate (step-size failure)."""


class NonConvergence(SPSError):
    """An iterative routine exhausted its budget without meeting tolerance."""


class BubbleEscape(SPSError):
    """Critical-exponent mass concentration: A grew beyond 1e3*k1 while the
    Poisson term stalled (loss-of-compactness scenario)."""


class ConfigError(SPSError):
    """Invalid or unknown configuration input (CLI exit code 2)."""
