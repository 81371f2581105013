class CsMatrixError(ValueError):
    exit_code = 3


class ConfigError(CsMatrixError):
    pass


# finite fields


class NotPrimePower(CsMatrixError):
    pass


class UnsupportedOrder(CsMatrixError):
    pass


class FieldMismatch(CsMatrixError):
    pass


class LogOfZero(CsMatrixError):
    pass


# sparse matrices


class PowerOutOfRange(CsMatrixError):
    pass


class ShapeMismatch(CsMatrixError):
    pass


class TargetTooLarge(CsMatrixError):
    pass


class IndexOutOfRange(CsMatrixError):
    pass


class UnreadableInput(CsMatrixError):
    exit_code = 4


class OutputError(CsMatrixError):
    pass


class MalformedAlist(CsMatrixError):
    exit_code = 4

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# constructions


class NotOddPrime(CsMatrixError):
    pass


class ZeroBeta(CsMatrixError):
    pass


class NotRegular(CsMatrixError):
    def __init__(self, message: str, block=None, histogram=None):
        super().__init__(message)
        self.block = block
        self.histogram = histogram or {}


# metrics


class ZeroColumn(CsMatrixError):
    def __init__(self, column: int):
        super().__init__(f"column {column} is all-zero")
        self.column = column


class TooFewColumns(CsMatrixError):
    pass


class BadShape(CsMatrixError):
    pass


class BadParams(CsMatrixError):
    pass


class DegenerateWeight(CsMatrixError):
    pass


class BadMu(CsMatrixError):
    pass


# builder and recovery


class NoFeasibleBase(CsMatrixError):
    pass


class BadK(CsMatrixError):
    pass


class SingularSupport(CsMatrixError):
    pass


class GirthTooSmall(CsMatrixError):
    pass
