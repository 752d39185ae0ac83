"""
Exception hierarchy for linfrep.

Checks never raise on a mathematical failure; they return reports. These
exceptions signal malformed input or incompatible operands.
"""

from typing import Any, Optional


class LinfrepError(Exception):
    """Base class for every error raised by linfrep."""


class ShapeMismatchError(LinfrepError):
    """Block sizes, key lengths or arities do not fit together."""


class DegreeError(LinfrepError):
    """An entry violates degree homogeneity."""


class SpaceMismatchError(LinfrepError):
    """Operands live over different graded spaces."""


class ParityMismatchError(LinfrepError):
    """A polyvector target is not (anti)symmetric as the shift requires."""


class ShiftError(LinfrepError):
    """An operation needs a different Poisson shift."""


class InstanceFormatError(LinfrepError):
    """An instance file violates the schema."""

    def __init__(self, message: str, entry: Optional[Any] = None):
        self.entry = entry
        if entry is not None:
            message = f"{message} (entry: {entry})"
        super().__init__(message)
