"""Exception hierarchy for the workbench.

Every error carries the exit code the command line reports for it and an
optional pipeline stage tag.
"""

from typing import Any, Optional


class WorkbenchError(Exception):
    exit_code = 2

    def __init__(self, message: str = "", stage: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.stage = stage

    def __str__(self) -> str:
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


# Input errors


class InputError(WorkbenchError):
    exit_code = 2


class ParseError(InputError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


class NonHomogeneousError(InputError):
    def __init__(self, message: str, term: str = ""):
        super().__init__(message)
        self.term = term


class RingMismatchError(InputError):
    pass


class DegenerateImageError(InputError):
    pass


# Algebraic errors


class AlgebraError(WorkbenchError):
    exit_code = 2


class ZeroDivisionInFieldError(AlgebraError, ZeroDivisionError):
    pass


class SingularMatrixError(AlgebraError):
    pass


class ZeroPolynomialError(AlgebraError):
    pass


class NotAGroebnerBasisError(AlgebraError):
    pass


class NotStableError(AlgebraError):
    pass


class NonMinimalResolutionError(AlgebraError):
    pass


class SaturationLimitError(AlgebraError):
    pass


class PreconditionError(AlgebraError):
    pass


# Genericity errors


class GenericityError(WorkbenchError):
    exit_code = 3

    def __init__(self, message: str, candidates: Optional[list[Any]] = None):
        super().__init__(message)
        self.candidates = list(candidates or [])


class GinInstabilityError(GenericityError):
    pass


class ReductionNumberDisagreement(GenericityError):
    pass


# Check failures


class CheckFailure(WorkbenchError):
    exit_code = 1


class TheoremViolation(CheckFailure):
    def __init__(self, check: str, message: str):
        super().__init__(f"{check}: {message}")
        self.check = check


class StageError(WorkbenchError):
    """Wraps a failure raised inside a named pipeline stage."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(str(cause), stage=stage)
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 2)
