"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so keep the classes distinct.
"""


class CoveringsError(Exception):
    pass


class DomainError(CoveringsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PreconditionError(CoveringsError, ValueError):
    """The input is well formed but violates a stated hypothesis (e.g. not an m-cover)."""


class CapacityError(CoveringsError):
    """A desk-scale guard (period length, group order, subset count) was exceeded."""
