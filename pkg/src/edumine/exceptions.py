"""Exception hierarchy shared by all edumine modules.

Everything raised on bad input data or bad parameters derives from
:class:`EduMineError`, so callers (notably the CLI) can distinguish
input problems from genuine bugs.
"""


class EduMineError(Exception):
    """Base class for all edumine input and data errors."""


# --- ingestion -------------------------------------------------------------

class MalformedRowError(EduMineError):
    """A CSV row (or header) does not match the expected schema."""

    def __init__(self, path, line, detail):
        super().__init__(f"{path}:{line}: {detail}")
        self.path = str(path)
        self.line = line
        self.detail = detail


class UnknownSubjectError(EduMineError):
    """A subject code is not part of the catalog in use."""

    def __init__(self, code, path=None, line=None):
        where = f"{path}:{line}: " if path is not None else ""
        super().__init__(f"{where}unknown subject {code!r}")
        self.code = code


class DuplicateEntryError(EduMineError):
    """The same key appeared twice; silent overwrites are never allowed."""


class OutOfRangeMarksError(EduMineError):
    """Marks fall outside [0, max_marks] for the subject's scale."""


class InfeasibleSpecError(EduMineError):
    """A synthetic-cohort description cannot be realized as stated."""


# --- association mining ----------------------------------------------------

class EmptyDatabaseError(EduMineError):
    """Mining requires at least one transaction."""


class EmptyCatalogError(EduMineError):
    """An operation averaged over subjects got an empty subject set."""


class MissingSubsetSupportError(EduMineError):
    """Rule generation needs the support of every antecedent subset."""


# --- correlation -----------------------------------------------------------

class SampleTooSmallError(EduMineError):
    """Fewer paired observations than the minimum sample size."""

    def __init__(self, n, minimum=3):
        super().__init__(f"sample size {n} is below the minimum of {minimum}")
        self.n = n
        self.minimum = minimum


class ZeroVarianceError(EduMineError):
    """One side of a paired sample is constant, so r is undefined."""

    def __init__(self, side):
        super().__init__(f"zero variance on side {side!r}")
        self.side = side


# --- decision tree ---------------------------------------------------------

class EmptySetError(EduMineError):
    """Entropy of an empty collection is undefined."""


class UnknownAttributeError(EduMineError):
    """An attribute name is absent from one or more examples."""


class EmptyTrainingSetError(EduMineError):
    """Tree induction needs at least one example."""


class InconsistentSchemaError(EduMineError):
    """Training examples do not share a single attribute-name set."""


class MissingAttributeError(EduMineError):
    """Prediction input lacks an attribute the tree splits on."""


# --- clustering ------------------------------------------------------------

class EmptyInputError(EduMineError):
    """Clustering needs at least one point."""


class DimensionMismatchError(EduMineError):
    """Points in one run must share a single coordinate dimension."""


class TooFewPointsError(EduMineError):
    """Min-max normalization needs at least two points."""
