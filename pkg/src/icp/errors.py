"""Exception hierarchy shared by every module."""


class IcpError(Exception):
    """Base class for all package errors."""


# combinatorics
class FaceTooSmall(IcpError):
    pass


class FacesShareTwoEdges(IcpError):
    pass


class NotADisk(IcpError):
    pass


class NonManifoldEdge(IcpError):
    pass


class GeneratorExhausted(IcpError):
    pass


class InvalidDeltaSequence(IcpError):
    pass


# angle conditions
class MissingAngle(IcpError):
    pass


class EpsilonZero(IcpError):
    pass


class TooManyInteriorVertices(IcpError):
    pass


# geometry kernel
class DomainError(IcpError, ValueError):
    pass


class DegenerateQuad(IcpError):
    pass


# solver
class InfeasibleTarget(IcpError):
    pass


class NoConvergence(IcpError):
    pass


class SingularJacobian(IcpError):
    pass


class PreconditionFailed(IcpError):
    pass


# layout
class HolonomyTooLarge(IcpError):
    pass


class NotEmbedded(IcpError):
    pass


class HasChord(IcpError):
    pass


# extremal length
class SetsIntersect(IcpError):
    pass


class BadNesting(IcpError):
    pass


# harmonic machinery
class NoBoundary(IcpError):
    pass


class NoDeepInterior(IcpError):
    pass


# io / cli
class SchemaError(IcpError):
    pass


class UsageError(IcpError):
    pass


class MissingRadius(IcpError):
    pass
