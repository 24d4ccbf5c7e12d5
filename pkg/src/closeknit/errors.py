"""Exception hierarchy shared by the whole package.

Cap overruns are separated from validation failures because the CLI maps
them to different exit codes (3 vs 2).
"""

from __future__ import annotations


class CloseKnitError(Exception):
    """Base class for all errors raised by this package."""


class StructureMismatch(CloseKnitError):
    """Operands with incompatible shape, carrier, ambient group or field."""


class ContractViolation(CloseKnitError):
    """A documented precondition was violated by the caller."""


class InvalidAction(CloseKnitError):
    """A symmetry generator does not act on the ambient object."""


class InputFormatError(CloseKnitError):
    """Malformed instance file (bad JSON, missing field, float numeric)."""


class CapExceeded(CloseKnitError):
    """Base for hard enumeration/size limits; never silently truncated."""


class OrbitCapExceeded(CapExceeded):
    """Orbit closure of the family grew past the configured cap."""


class ElementCapExceeded(CapExceeded):
    """Group element enumeration grew past the configured cap."""


class EnumerationCapExceeded(CapExceeded):
    """A brute-force enumeration (oracle, coefficient sweep) hit its cap."""


class StrongSearchExhausted(CapExceeded):
    """Strong-element enumeration over index subsets hit its cap."""


class ConditionViolation(CloseKnitError):
    """Loaded data violate one of the defining lattice conditions."""

    def __init__(self, message: str, clause: str = ""):
        super().__init__(message)
        self.clause = clause


class AssociativityViolation(ConditionViolation):
    """The meet table is not a meet-semilattice."""


class MonotonicityViolation(ConditionViolation):
    """The distance table is not monotone in the lattice argument."""


class IncrementViolation(ConditionViolation):
    """The increment table breaks growth or the equal-distance collapse."""


class EquivarianceViolation(ConditionViolation):
    """A symmetry generator does not commute with the instance data."""
