"""Exception types shared across the package.

Errors that signal a violated mathematical assumption carry exit code 2 so
the command line tool can distinguish them from plain input validation
problems (exit code 1).
"""


class MaxPlusError(Exception):
    """Base class for failures raised by this package."""

    exit_code = 2


class DimensionMismatch(MaxPlusError):
    """Vector or matrix shapes do not line up."""

    exit_code = 1


class NoCycle(MaxPlusError):
    """The precedence graph of finite arcs contains no cycle at all."""


class PositiveCycle(MaxPlusError):
    """Some cycle has positive mean, so the Kleene star diverges."""


class AssumptionViolated(MaxPlusError):
    """The star kernel is not entrywise finite, or a limit hypothesis failed."""


class AssumptionViolatedWarning(UserWarning):
    """Star kernel has non-finite entries; Martin analysis will refuse it."""


class NotHarmonic(MaxPlusError):
    """A function required to satisfy A h = h does not."""


class NotNormalized(MaxPlusError):
    """A function required to vanish at the basepoint does not."""


class HMinusInfinityAtStart(MaxPlusError):
    """Downhill construction started where the potential is minus infinity."""


class NotAlmostGeodesic(MaxPlusError):
    """A sampled path misses the star kernel by more than the allowed slack."""


class NotEventuallyConstant(MaxPlusError):
    """The Martin class sequence of a path never settled on its final value."""


class NonpositiveHorizon(MaxPlusError):
    """Finite-horizon kernels need a strictly positive time argument."""

    exit_code = 1


class NonpositiveLambda(MaxPlusError):
    """This closed form only exists for a strictly positive spectral shift."""

    exit_code = 1


class BothEndpointsZero(MaxPlusError):
    """With zero spectral shift the optimal horizon at the origin is undefined."""

    exit_code = 1


class NonUnitDirection(MaxPlusError):
    """Boundary directions must have Euclidean norm one."""

    exit_code = 1


class GridTooSmall(MaxPlusError):
    """The discrete maximizer touched the grid boundary; enlarge the window."""

    exit_code = 1

    def __init__(self, message, reports=None):
        super().__init__(message)
        self.reports = reports or []


class GradientSingularity(MaxPlusError):
    """Finite differences disagree across refinement; no reliable gradient."""


class EmptyContour(MaxPlusError):
    """The requested level does not intersect the sampled bounding box."""

    exit_code = 1
