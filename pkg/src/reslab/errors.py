"""Exception hierarchy shared across the package."""


class ReslabError(Exception):
    """Base class for all package errors."""


class NonMonotoneW(ReslabError):
    """W' is not strictly positive on the certified range."""


class OddDegree(ReslabError):
    """The degree m at zero must be even."""


class NonzeroConstant(ReslabError):
    """W must vanish at the origin."""


class OutOfCertifiedRange(ReslabError):
    """Evaluation requested beyond the certified monotonicity range."""


class DegreeNotTwo(ReslabError):
    """Operation requires both potentials to have degree 2 at zero."""


class BelowBarrierEnergy(ReslabError):
    """Energy below the barrier height: hit time undefined."""


class DegenerateClip(ReslabError):
    """Clipping produced an empty region."""


class NumericalCornerAmbiguity(ReslabError):
    """A hit is within corner tolerance of a vertex but unstable to classify."""


class IdentityViolation(ReslabError):
    """Saddle-connection bookkeeping identity failed beyond tolerance."""


class ZeroVector(ReslabError):
    """Direction undefined: all displacement coefficients vanish."""


class NotPeriodic(ReslabError):
    """Cylinder extraction requires a periodic orbit."""


class BreakpointTheta(ReslabError):
    """theta coincides with an energy-partition breakpoint."""


class BoxTooLarge(ReslabError):
    """Integer-relation search box exceeds the candidate cap."""


class NotQuasiPeriodic(ReslabError):
    """Sampled map fails the geometric quasi-periodicity test."""


class RatioOne(ReslabError):
    """Equal leading values force ratio 1; tuning impossible."""


class InfeasiblePositivity(ReslabError):
    """No offset in the allowed family restores positivity."""


class InsufficientOffset(ReslabError):
    """Provided offset d leaves W' non-positive somewhere."""


class EventLocalizationFailure(ReslabError):
    """Could not bracket a boundary crossing to tolerance."""


class EnergyDriftExceeded(ReslabError):
    """Integrated energy drifted beyond the allowed budget."""


class OffShell(ReslabError):
    """Phase state does not match the requested (E, theta) shell."""
