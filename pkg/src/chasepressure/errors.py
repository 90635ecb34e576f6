"""Exception types shared across the package."""


class ChasePressureError(Exception):
    """Base class for all package errors."""


class BallsExhausted(ChasePressureError):
    """The innings has no balls left and the target was not reached."""


class TargetReached(ChasePressureError):
    """The target has been reached; the pressure index is 0 by censoring."""


class NonMonotoneInnings(ChasePressureError):
    """Cumulative runs or balls decreased between over-end states."""


class ParseError(ChasePressureError):
    """Input file is malformed."""


class SchemaError(ParseError):
    """Input file is well-formed but missing required fields."""


class IllegalInnings(ChasePressureError):
    """Innings data violates the laws (11+ dismissals, negative runs, ...)."""


class EmptyCorpus(ChasePressureError):
    """No sequence in the corpus is long enough to contribute a transition."""


class ModelPhaseMismatch(ChasePressureError):
    """A phase-specific model was queried for an over outside its phase."""


class DegenerateSample(ChasePressureError):
    """Sample unusable for distribution fitting (too small or constant)."""


class SplitLeakage(ChasePressureError):
    """A test match id appears in the model's training set."""


class EmptyInput(ChasePressureError):
    """An aggregation was called with no data."""
