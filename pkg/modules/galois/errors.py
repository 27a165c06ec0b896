"""
Exception hierarchy. The CLI is the only place these become exit codes:
InputError / LogicError -> 2, ResourceCapError -> 3.
"""
from __future__ import annotations

from typing import Optional


class GaloisError(Exception):
    """Base class for every error raised by ``modules.galois``."""


class InputError(GaloisError, ValueError):
    """Malformed or ill-typed input: out-of-range tuple, arity mismatch, unknown name."""


class InvariantViolation(InputError):
    """A structural operator would produce something that is not a system.

    ``offender`` is the member that breaks downward closure or grounding, when there is one.
    """

    def __init__(self, message: str, offender: object = None):
        super().__init__(message)
        self.offender = offender


class FormatError(InputError):
    """A line of one of the text formats did not parse."""

    def __init__(self, message: str, line_no: Optional[int] = None, text: str = ""):
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{where}{message}" + (f" -- {text!r}" if text else ""))
        self.line_no = line_no
        self.text = text


class ResourceCapError(GaloisError, RuntimeError):
    """A configured enumeration cap (``caps.Caps``) would be exceeded."""

    def __init__(self, cap: str, needed: int, limit: int):
        super().__init__(f"{cap}: need {needed}, cap is {limit} (raise it with --caps {cap}=N)")
        self.cap = cap
        self.needed = needed
        self.limit = limit


class LogicError(GaloisError):
    """A precondition of a constructive algorithm does not hold (e.g. separating a member)."""
