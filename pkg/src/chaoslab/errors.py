"""Exception types raised across chaoslab."""


class ChaoslabError(Exception):
    """Base class for every error raised by this package."""


class ClosureExceedsCap(ChaoslabError):
    pass


class BoundExceeded(ChaoslabError):
    pass


class IdealKindMismatch(ChaoslabError):
    pass


class PhaseTooLarge(ChaoslabError):
    pass


class SemigroupTooLarge(ChaoslabError):
    pass


class NotClosed(ChaoslabError):
    pass


class NotInvariant(ChaoslabError):
    pass


class NotEquivalence(ChaoslabError):
    """Asymptoticity failed to be an equivalence relation (always a bug)."""


class NotEquivariant(ChaoslabError):
    pass


class NotGenerating(ChaoslabError):
    pass


class HypothesisViolated(ChaoslabError):
    pass


class ParticularPointInD(ChaoslabError):
    pass


class NonAbelian(ChaoslabError):
    pass


class CardinalOrderViolated(ChaoslabError):
    pass


class WindowTooSmall(ChaoslabError):
    pass


class InvalidStructure(ChaoslabError):
    """A table or spec violates one of its structural invariants."""


class ParseError(ChaoslabError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class ValidationError(ChaoslabError):
    def __init__(self, path: str, message: str = "invalid value"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


class UnsupportedCommandForKind(ChaoslabError):
    pass


class UnknownSuite(ChaoslabError):
    pass
