"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: parse problems exit 2, violated
mathematical hypotheses exit 3, too-small analysis windows exit 4.
"""


class HilbertSallyError(Exception):
    """Base class for all package errors."""


class PolyParseError(HilbertSallyError):
    """Malformed polynomial text; carries the offending position."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class RingMismatchError(HilbertSallyError):
    """Operands live in different rings."""


class ExponentOverflowError(HilbertSallyError):
    """Exponent outside the supported desk-scale range."""


class HypothesisViolation(HilbertSallyError):
    """A standing mathematical hypothesis failed on concrete input.

    Examples: an ideal that should be m-primary is not, a filtration is
    not admissible, a containment required by the theory fails.
    """


class NotZeroDimensionalError(HypothesisViolation):
    """Colength requested for an ideal that is not m-primary."""


class ContainmentError(HypothesisViolation):
    """Quotient length requested for a non-nested pair of ideals."""


class DegreeWindowError(HilbertSallyError):
    """Operation on a truncated basis outside its validity window."""


class WindowTooSmallError(HilbertSallyError):
    """The sample window is too short to certify coefficients."""


class TableExhaustedError(HilbertSallyError):
    """A table filtration was asked for an entry beyond its last ideal."""


class ReductionNotCertifiedError(HilbertSallyError):
    """No stable run of reduction equalities found within the window."""


class ClassifierInconsistencyError(HypothesisViolation):
    """A theorem-predicted value disagrees with the computed one.

    This is the falsification surface of the whole artifact: the report
    with the failing expected/computed pair rides along.
    """

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class JobError(HilbertSallyError):
    """Malformed job file."""
