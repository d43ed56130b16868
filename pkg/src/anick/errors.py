"""Exception hierarchy shared by every layer of the engine."""


class AnickError(Exception):
    """Base class for all engine errors."""


class DegreeOutOfCap(AnickError):
    def __init__(self, degree, cap):
        super().__init__(f"degree {degree} exceeds configured cap {cap}")
        self.degree = degree
        self.cap = cap


class MixedPresentation(AnickError):
    pass


class InvalidDerivation(AnickError):
    pass


class NotACycle(AnickError):
    pass


class NotACoderivation(AnickError):
    pass


class NotStrict(AnickError):
    pass


class NotAModPCycle(AnickError):
    pass


class HypothesisFails(AnickError):
    pass


class HypothesisViolation(AnickError):
    pass


class OutOfRange(AnickError):
    pass


class Obstructed(AnickError):
    """A mathematical obstruction; carries the offending homology class."""

    def __init__(self, message, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction


class TheoryViolation(AnickError):
    """Raised when a solve that the theory guarantees comes back empty.

    Under the stated hypotheses this never happens; seeing it means a sign
    convention or bookkeeping bug, not bad user input.
    """


class SolveFailed(TheoryViolation):
    pass


class IterationBoundExceeded(TheoryViolation):
    pass


class ParseError(AnickError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            loc = f" (line {line}, column {column})"
        elif column is not None:
            loc = f" (column {column})"
        else:
            loc = ""
        super().__init__(message + loc)
        self.message = message
        self.line = line
        self.column = column


class ValidationError(AnickError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
