"""Exception types raised by the library."""


class LVICError(Exception):
    """Base class for all library errors."""


class UnboundedRegion(LVICError):
    pass


class BreakpointMiss(LVICError):
    """A parametrized family is not affine on a supplied subinterval."""


class WidthMismatch(LVICError):
    pass


class ZeroCapacityViolation(LVICError):
    pass


class DegenerateInterference(LVICError):
    pass


class UndefinedGap(LVICError):
    pass


class GridTooLarge(LVICError):
    pass


class GridNotClosed(LVICError):
    pass
