"""Exception hierarchy shared by all cautomata modules.

Every message names the violated invariant or the failing glossary term so
that CLI reports stay self-explanatory.
"""

from __future__ import annotations


class CautomataError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CautomataError):
    """A structural invariant of an automaton, machine, or system is violated."""


class RankError(ValidationError):
    """An operation received an automaton of the wrong rank."""


class ShapeError(CautomataError):
    """An action vector does not have the shape required by the operation."""


class EmptyOperandsError(CautomataError):
    """The composition was invoked with no operands."""


class NotEnabledError(CautomataError):
    """A machine action was fired in a configuration where it is not enabled."""


class TraceStuckError(CautomataError):
    """A simulated trace hit a non-enabled step.

    ``step_index`` is the zero-based position of the offending action.
    """

    def __init__(self, step_index: int, message: str) -> None:
        super().__init__(message)
        self.step_index = step_index


class UndefinedTranslationError(CautomataError):
    """A word contains an element on which the action translation is undefined."""


class EnvironmentChannelsError(CautomataError):
    """A system uses environment ('-') channels but environment mode is off."""


class ParseError(CautomataError):
    """An input file could not be parsed.

    ``line`` is the 1-based line number when known, otherwise 0.
    """

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line
        self.message = message
