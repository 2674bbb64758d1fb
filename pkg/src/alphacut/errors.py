"""Exception types shared across the package."""


class AlphacutError(Exception):
    """Base class for all package errors."""


class StructuralError(AlphacutError):
    """A curve or document is malformed: gaps, overlaps, bad ordering."""


class RepresentationError(AlphacutError):
    """A curve violates the cut-representation axioms."""


class ParseError(AlphacutError):
    """Text could not be parsed as an expression or document."""


class SmootherConditionError(AlphacutError):
    """A candidate smoother fails the conditions needed for a target.

    Carries the per-condition verdicts so callers can report which
    clause failed and at which level.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
