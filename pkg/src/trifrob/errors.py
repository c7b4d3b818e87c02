"""Exception hierarchy shared by all modules.

Every error raised on purpose derives from :class:`TrifrobError`, so the
command line front end can map it to the "operational error" exit code.
"""


class TrifrobError(Exception):
    """Base class for every deliberate failure in the package."""


class NumericalError(TrifrobError):
    pass


class StepUnderflow(NumericalError):
    """Adaptive step collapsed, usually because the path runs close to a pole."""


class NonFinite(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class Degenerate(NumericalError):
    pass


class BranchInconsistency(NumericalError):
    """A continued branch could not be matched unambiguously to its reference."""


class BranchCut(NumericalError):
    pass


class DomainError(TrifrobError):
    pass


class RadicalBranch(DomainError):
    pass


class OddDimension(DomainError):
    pass


class Singular(DomainError):
    pass


class SingularFrame(Singular):
    pass


class PoleAtS(DomainError):
    pass


class CoincidentCoordinates(DomainError):
    pass


class DegenerateCrossRatio(DomainError):
    pass


class ZeroMetricCoefficient(DomainError):
    pass


class DegeneratePolynomial(DomainError):
    pass


class GridTooCoarse(DomainError):
    pass


class EigenCheckFailed(NumericalError):
    pass


class MarkedColumnZero(DomainError):
    pass


class NonClosedForms(NumericalError):
    pass


class DomainViolation(DomainError):
    pass


class NearSingular(DomainError):
    pass


class RootCollision(DomainError):
    pass


class ParseError(TrifrobError):
    pass
