"""Exception hierarchy shared by all climind modules.

The CLI maps these onto exit codes: data problems (bad input files,
degenerate columns, contract violations) exit 2, numerical failures exit 3,
reasoning-backend failures exit 4.
"""


class ClimindError(Exception):
    """Base class for all errors raised by climind."""


class ContractError(ClimindError):
    """A documented precondition or call contract was violated."""


class DataError(ClimindError):
    """Input data cannot be used as requested."""


class ParseError(DataError):
    """Malformed input text; message carries the offending position."""


class EmptyDataError(DataError):
    """An operation left no usable observations."""


class ConflictError(DataError):
    """Duplicate or contradictory records in the input."""


class DegenerateColumnError(DataError):
    """A variable is constant where nonzero variance is required."""


class DegenerateSampleError(DataError):
    """Samples are too degenerate for a kernel bandwidth (zero spread)."""


class RenderError(DataError):
    """A report references an artifact that cannot be resolved."""


class NumericError(ClimindError):
    """A numerical routine failed (ill-conditioned solve, non-finite values)."""


class BackendError(ClimindError):
    """The reasoning backend failed to produce a usable message."""


class ConfigurationError(ClimindError):
    """Invalid or missing configuration, e.g. an absent credential."""
