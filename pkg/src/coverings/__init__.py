"""Verification and search tools for coset covers of abelian groups and covers of Z."""

from coverings.errors import CapacityError, CoveringsError, DomainError, PreconditionError
from coverings.report import BoundReport, Witness

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CapacityError",
    "CoveringsError",
    "DomainError",
    "PreconditionError",
    "Witness",
]
