"""Exception hierarchy shared by all mpentropy modules."""


class MPEntropyError(Exception):
    """Base class for all errors raised by this package."""


class NonConvergence(MPEntropyError):
    """A series or product could not be certified to the requested
    tolerance at the available working precision."""


class RegimeError(MPEntropyError):
    """The (q, a) parameters lie outside the regime required by the
    requested quantity (e.g. a <= 1 where 1 < a < 1/q is needed)."""


class DomainError(MPEntropyError):
    """An argument lies outside the domain of the requested map
    (e.g. t outside the open interval (alpha, 0))."""


class AccuracyError(MPEntropyError):
    """A truncated-measure computation cannot certify the requested
    accuracy; regenerate the measure with a smaller tolerance."""


class IllConditioned(MPEntropyError):
    """Triangular factorization of the Hankel matrix hit a non-positive
    pivot: working precision is too low, or the sequence is not a
    nondegenerate moment sequence."""


class DivergenceSuspected(MPEntropyError):
    """Series terms of the Nevanlinna functions fail to decay; the
    moment problem is likely determinate (or precision is insufficient),
    so no function quadruple is produced."""


class WindowExhausted(MPEntropyError):
    """The integration window reached its maximum size before the tail
    estimate dropped below the requested tolerance."""
