"""Rate regions, TDM-dominance oracles and tools for two-user interference
channels where each transmitter sees only part of the channel state."""

from .errors import (BreakpointMiss, DegenerateInterference, GridNotClosed, GridTooLarge,
                     LVICError, UnboundedRegion, UndefinedGap, WidthMismatch,
                     ZeroCapacityViolation)
from .geometry import LinearConstraint, Polytope, RateRegion, contains, regions_equal
from .ldic import DeterministicGains, ViewId, tdm_dominating_region, view

__version__ = "0.1.0"
