"""Exception hierarchy shared across the package.

Everything raised on bad data or bad composition derives from
``PhenotopoError`` so the CLI can map it to a single exit code.
"""


class PhenotopoError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(PhenotopoError):
    """CSV header is missing a required column."""


class RowError(PhenotopoError):
    """A CSV data row could not be turned into an observation."""


class UnknownLabelError(PhenotopoError):
    """A requested cultivar or season does not occur in the dataset."""


class EmptyGroupError(PhenotopoError):
    """A grouping selected no observations carrying the requested LTE level."""


class DegenerateScaleError(PhenotopoError):
    """All |delta| values in a normalization scope coincide; Eqn-style rescaling is undefined."""


class JdayRangeError(PhenotopoError):
    """A season day index lies outside the dormant window."""


class MatrixContractError(PhenotopoError):
    """A distance matrix violates the symmetry/diagonal/sign contract."""


class EssentialClassError(PhenotopoError):
    """A diagram passed to a matching metric still contains infinite-death pairs."""


class ProvenanceMismatchError(PhenotopoError):
    """A diagram and a point cloud from different pipelines were combined."""
