class NotApplicableError(Exception):
    """The hypotheses of the requested structure result are not asserted."""


class InconsistentFlagsError(ValueError):
    """Asserted hypotheses contradict the homology data."""


class CrossCheckError(AssertionError):
    """Two independent computations of the same object disagree."""
