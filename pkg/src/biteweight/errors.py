"""Exception hierarchy shared by all biteweight modules."""


class BiteWeightError(Exception):
    """Base class for all errors raised by this package."""


class MissingFileError(BiteWeightError):
    """A file referenced by a manifest does not exist."""


class ParseError(BiteWeightError):
    """A data file could not be parsed; carries the offending line number."""

    def __init__(self, message: str, path=None, line: int | None = None):
        self.path = path
        self.line = line
        where = f"{path}:{line}: " if path is not None and line is not None else ""
        super().__init__(f"{where}{message}")


class InvariantViolation(BiteWeightError):
    """Loaded or constructed data breaks a documented invariant."""


class UnknownBiteError(BiteWeightError):
    """Requested bite id does not exist in the session."""


class TooFewSamplesError(BiteWeightError):
    """Stream too short for the requested resampling."""


class InvalidParamsError(BiteWeightError):
    """Filter design parameters are out of their valid range."""


class StreamTooShortError(BiteWeightError):
    """Stream shorter than the zero-phase filter's edge padding."""


class InvalidOrderError(BiteWeightError):
    """Median filter order must be odd."""


class NoMouthEventError(BiteWeightError):
    """No mouth-dominant window found; the bite is unusable for the
    behavioral features."""


class EmptyBiteError(BiteWeightError):
    """Bite slice contains no IMU samples."""


class NoWindowsError(BiteWeightError):
    """Aggregation requested over an empty window-statistics series."""


class EmptyMatrixError(BiteWeightError):
    """Scaler fitted on a matrix with no rows."""


class NotConvergedError(BiteWeightError):
    """SVR solver hit its pass limit before closing the duality gap."""

    def __init__(self, gap: float, passes: int):
        self.gap = gap
        self.passes = passes
        super().__init__(
            f"solver did not converge: duality gap {gap:.3e} after {passes} passes"
        )


class EmptyTrainingError(BiteWeightError):
    """Model fitted with too little training data."""


class TooFewSubjectsError(BiteWeightError):
    """Leave-one-subject-out needs at least two subjects."""


class EmptyIntersectionError(BiteWeightError):
    """The models' usable-bite sets have no bite in common."""


class MismatchedBiteSetsError(BiteWeightError):
    """Model and baseline folds do not cover the same bites."""


class InvalidProfileError(BiteWeightError):
    """Synthetic generator profile is inconsistent."""


class NoReportsFoundError(BiteWeightError):
    """Report assembly found no readable metrics files."""


class AlreadyRightWarning(UserWarning):
    """mirror_hand called on a stream already in right-wrist orientation."""
