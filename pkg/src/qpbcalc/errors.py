"""Exception hierarchy shared by all modules."""


class QpbError(Exception):
    """Base class for engine errors."""


class DivisionByZero(QpbError, ZeroDivisionError):
    pass


class PoleAtPoint(QpbError):
    pass


class StepLimitExceeded(QpbError):
    pass


class PresentationMismatch(QpbError):
    pass


class NoHopfData(QpbError):
    pass


class AxiomViolation(QpbError):
    pass


class NotAHopfIdeal(QpbError):
    pass


class NoSolution(QpbError):
    pass


class AmbiguousSolution(QpbError):
    pass


class InconsistentTable(QpbError):
    pass


class IllDefinedCoaction(QpbError):
    pass


class NotGenerated(QpbError):
    pass


class NotFreeInWindow(QpbError):
    pass


class UnsupportedOreElement(QpbError):
    pass


class NotInvertibleCoactionImage(QpbError):
    pass


class TableNotInvertible(QpbError):
    pass


class OrderDependenceDetected(QpbError):
    pass


class NotIsomorphic(QpbError):
    pass


class NotCoinvariant(QpbError):
    pass


class RoundTripFailure(QpbError):
    pass


class CorrespondenceFailure(QpbError):
    pass


class GluingFailure(QpbError):
    pass


class LawViolation(QpbError):
    pass


class IdentityViolation(QpbError):
    pass


class ParseError(QpbError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} at column {column}")
        self.column = column


class UnknownSuite(QpbError):
    pass
