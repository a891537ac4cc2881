"""Exception hierarchy.

Every failure that a caller can act on has its own class so the CLI can map
it to an exit status without string matching.
"""


class PisotIFSError(Exception):
    """Base class for all errors raised by this package."""


class CertificationError(PisotIFSError):
    """A certified quantity could not be established."""


class NotPisot(CertificationError):
    pass


class ReducibleDetected(CertificationError):
    pass


class PrecisionInsufficient(CertificationError):
    """Enclosures are too wide at the current precision; raise it and retry."""


class TolUnreachable(CertificationError):
    """The requested radius was not met before hitting the precision cap."""


class ThresholdViolation(PisotIFSError):
    """An exponent lies below the trace-integrality threshold."""


class DualLatticeViolation(PisotIFSError):
    """A translation (or scaled translation) is not in T(theta)."""


class NotInDualLattice(DualLatticeViolation):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"translation mu_{index} is not in T(theta)")


class NotStrictContraction(PisotIFSError):
    pass


class DriftNonPositive(PisotIFSError):
    pass


class NoCrossing(PisotIFSError):
    """The similarity dimension never exceeds one."""


class NoCommonFixedPoint(PisotIFSError):
    pass


class MalformedDecomposition(PisotIFSError):
    pass


class EmptyBatch(PisotIFSError):
    pass


class InvalidSystem(PisotIFSError):
    """Malformed system description (bad probabilities, shapes, keys)."""
