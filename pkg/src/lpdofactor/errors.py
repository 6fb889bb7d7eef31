"""Exception hierarchy shared by every layer of the package."""


class LpdoError(Exception):
    """Base class for all errors raised by lpdofactor."""


class ZeroInversion(LpdoError, ZeroDivisionError):
    pass


class ZeroOperator(LpdoError, ValueError):
    pass


class ZeroGauge(LpdoError, ValueError):
    pass


class UnsupportedDimension(LpdoError):
    """The requested decision procedure exists only for two base variables."""


class NonConstantCoefficients(LpdoError, ValueError):
    pass


class InvalidType(LpdoError, ValueError):
    """Malformed factorization type (degree-0 factor, wrong dimension, ...)."""


class SymbolMismatch(LpdoError, ValueError):
    """The product of the type's factors is not the operator's symbol."""


class SymbolsNotCoprime(LpdoError):
    pass


class DegreeOutOfRange(LpdoError, ValueError):
    pass


class InvalidPartialFactorization(LpdoError, ValueError):
    pass


class SeedOrderTooHigh(LpdoError, ValueError):
    pass


class ParseError(LpdoError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class UndeclaredSymbol(ParseError):
    pass
