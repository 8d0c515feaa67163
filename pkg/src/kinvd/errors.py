"""Exception hierarchy shared across the package."""


class KinvdError(Exception):
    """Base class for all errors raised by this package."""


class PolygonError(KinvdError, ValueError):
    pass


class TooFewVertices(PolygonError):
    pass


class NotConvex(PolygonError):
    pass


class OriginNotInterior(PolygonError):
    pass


class DuplicateOrientation(PolygonError):
    pass


class ZeroPolynomial(KinvdError, ValueError):
    pass


class DegenerateScenario(KinvdError):
    """A certificate or event polynomial vanishes identically, or two
    trajectories collide."""

    def __init__(self, message, *, sites=None, chord=None):
        super().__init__(message)
        self.sites = sites
        self.chord = chord


class IdenticallyZero(DegenerateScenario):
    pass


class DegenerateDirection(KinvdError, ValueError):
    pass


class SingularContactSystem(KinvdError, ValueError):
    pass


class OffSegment(KinvdError):
    """Placement exists on the supporting lines but a contact misses its
    closed edge segment. Carries the placement so callers may inspect it."""

    def __init__(self, message, placement=None, on_segment=None):
        super().__init__(message)
        self.placement = placement
        self.on_segment = on_segment


class DegenerateConfiguration(KinvdError):
    pass


class DiagramError(KinvdError):
    pass


class NotInternal(DiagramError):
    pass


class IllegalLabelStep(DiagramError):
    pass


class NotIncident(DiagramError):
    pass


class NoExternalEdgelet(DiagramError):
    pass


class NotNonCorner(DiagramError):
    pass


class EndpointMismatch(DiagramError):
    pass


class SimultaneousEvents(KinvdError):
    pass


class InconsistentCertificate(KinvdError):
    pass


class SweepInconsistency(KinvdError):
    pass


class EventTimeCollision(KinvdError):
    pass


class ParseError(KinvdError, ValueError):
    pass
