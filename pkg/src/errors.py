"""
Exception hierarchy for permadd.

Every error carries the process exit code the command line maps it to:
2 for bad input, 1 for a construction that could not be completed,
3 when a desk-scale guard stops a computation.
"""

from __future__ import annotations


class PermAddError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class ParameterError(PermAddError, ValueError):
    """A precondition on an argument does not hold."""


class FieldMismatchError(PermAddError, TypeError):
    """Elements of different fields were combined without an embedding."""


class SubfieldError(ParameterError):
    """A value is not in the subfield it was declared to live in."""


class ZeroInverseError(ParameterError, ZeroDivisionError):
    """Zero was inverted."""


class ContextMismatchError(ParameterError):
    """Operands belong to different groups, algebras or decompositions."""


class GroupError(ParameterError):
    """Invalid group description or element."""


class NetworkError(ParameterError):
    """Malformed network: cycles, unknown ids, bad sources or demands."""


class ModuleMembershipError(ParameterError):
    """A message is outside the module, or a pick is outside the annihilator."""


class InsufficientCutError(ParameterError):
    """Fewer edge-disjoint paths exist than the requested number."""


class ConstructionError(PermAddError, RuntimeError):
    """A constructive solver failed to produce a verified code."""

    exit_code = 1


class DeskScaleError(PermAddError, RuntimeError):
    """A computation would exceed the configured size limits."""

    exit_code = 3


class AnnihilatorMismatchError(PermAddError, RuntimeError):
    """The two annihilator constructions disagree (internal error)."""

    exit_code = 1
