"""Exception types that map onto the CLI exit-code taxonomy.

Plain ``ValueError`` is reserved for bad arguments and violated call
preconditions (exit code 1 at the CLI); the classes below mark problems
with user-supplied data (exit 2) and numerical degeneracies (exit 3).
"""


class HrplabError(Exception):
    """Base class for package-specific failures."""


class DataError(HrplabError):
    """Malformed or insufficient input data (files, spans, coverage)."""


class NumericalError(HrplabError):
    """Numerical degeneracy: singular covariance, zero variance, etc."""
