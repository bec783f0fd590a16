"""Exception hierarchy shared across the package."""


class TCShiftError(Exception):
    """Base class for all library errors."""


class AtomAtZero(TCShiftError):
    """A reciprocal norm or renormalisation hit an atom at the origin."""


class NotProbability(TCShiftError):
    """A measure that must have total mass one does not."""


class DegenerateMeasure(TCShiftError):
    """A measure concentrated at the origin carries no weight sequence."""


class NotSubnormal(TCShiftError):
    """The requested construction exists only for subnormal weight data."""


class InvalidWeight(TCShiftError):
    """A shift weight lies outside (0, inf)."""


class DepthExceeded(TCShiftError):
    """A weight or moment index lies beyond the configured depth limit."""


class PreconditionViolated(TCShiftError):
    """An operation received data that fails its stated precondition."""


class InvalidFlat(TCShiftError):
    """Flat-instance parameters violate the admissible range."""


class ValidationError(TCShiftError):
    """An instance file is well formed but violates a model invariant."""


class ParseError(TCShiftError):
    """An instance file cannot be read or is structurally malformed."""
