"""Exception types shared across the package."""


class DqlabError(Exception):
    """Base class for all computation errors raised by this package."""


class NotContained(DqlabError):
    """A claimed subspace inclusion fails for some basis vector."""


class NotAnIdeal(DqlabError):
    """A subspace handed to quotient_algebra is not closed under multiplication."""


class UnsupportedCharacteristic(DqlabError):
    """Operation requires characteristic zero (trace-form radical)."""


class DegreeBoundInsufficient(DqlabError):
    """Nilpotency witness failed: quotient may be infinite-dimensional,
    or the degree bound is too small. Raising the bound may help."""


class DimensionBlowup(DqlabError):
    """A graded piece of the bar truncation exceeds the configured cap."""


class WindowExceedsDepth(DqlabError):
    """Requested cohomology window is deeper than the truncation supports."""


class NotLocal(DqlabError):
    """H^0 is not an Artinian local algebra, so the periodicity-class
    search hypothesis fails."""


class NoPeriodicityClass(DqlabError):
    """No degree -2 class verifies as a periodicity element in the window."""


class NotIsolated(DqlabError):
    """The potential does not define an isolated singularity (Milnor
    number did not stabilize over the probe schedule)."""


class NoStabilization(DqlabError):
    """Truncation-order schedule exhausted without two consecutive orders
    agreeing."""


class ZeroPotential(DqlabError):
    """The potential is the zero polynomial."""


class ConstantTerm(DqlabError):
    """The potential has a nonzero constant term (not in the maximal ideal)."""


class InputError(DqlabError):
    """Malformed input file or unparseable expression."""
