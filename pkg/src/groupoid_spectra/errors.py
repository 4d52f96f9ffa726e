"""Exception hierarchy.

The command-line front end maps these onto exit codes: schema problems
exit with 1, numerical failures with 2, inconclusive outcomes with 3.
"""


class GroupoidSpectraError(Exception):
    """Base class for every error raised by this package."""


class NumericError(GroupoidSpectraError):
    """A computation could not be carried out or its precondition failed."""


class OutOfWindowError(NumericError):
    """An operation needed an arrow or unit outside the materialized window."""


class InvarianceError(NumericError):
    """A unit subset expected to be invariant is not.

    Attributes
    ----------
    witness : Arrow
        An arrow with exactly one endpoint inside the subset.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CocycleError(NumericError):
    """A phase map fails the cocycle identity, normalization or modulus test."""


class IncompleteCocycleError(CocycleError):
    """A phase map has no value on some composable pair."""


class NotRootOfUnityError(CocycleError):
    """A phase that was required to lie in the N-th roots of unity does not."""


class AliasingError(NumericError):
    """A character of degree n cannot be separated by mu_N because |n| >= N."""


class NotHermitianError(NumericError):
    """A Hermitian-only routine received a non-Hermitian operator."""


class NotStandardError(NumericError):
    """The groupoid has no dense open orbit with trivial isotropy."""


class UnsupportedError(NumericError):
    """The requested route does not apply to this isotropy group."""


class PreconditionError(NumericError):
    """A theorem hypothesis checked at run time does not hold.

    Attributes
    ----------
    overlap : tuple of float or None
        For energy-bump checks, the interval where the bump meets the
        asymptotic spectrum.
    """

    def __init__(self, message, overlap=None):
        super().__init__(message)
        self.overlap = overlap


class WindowCapError(NumericError):
    """A requested window exceeds the materialization cap."""


class InconclusiveError(GroupoidSpectraError):
    """The computation finished but the result cannot be trusted at this scale."""


class ModelFileError(GroupoidSpectraError):
    """A model file failed to parse or to validate against the schema."""

    def __init__(self, message, line=None, column=None):
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column
