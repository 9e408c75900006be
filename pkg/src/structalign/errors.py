"""Error taxonomy shared by the library and the command line tool.

The CLI maps each family to a distinct exit code: DataFormatError -> 2,
ValidationError -> 3, NumericError -> 4.
"""


class StructAlignError(Exception):
    """Base class for all toolkit errors."""


class DataFormatError(StructAlignError):
    """A file is missing, unparseable, or violates its declared format."""


class ValidationError(StructAlignError):
    """Inputs break an operation's contract (shapes, ranges, label sets)."""


class NumericError(StructAlignError):
    """Non-finite data or a numerically degenerate computation."""
