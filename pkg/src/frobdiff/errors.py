"""Exception hierarchy shared by all modules.

Every error that can escape the library derives from FrobdiffError and
carries a stable ``code`` (the class name) so the CLI can map failures to
machine-readable output without string matching.
"""


class FrobdiffError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


class DivisionByZero(FrobdiffError):
    pass


class FieldMismatch(FrobdiffError):
    pass


class BasisViolation(FrobdiffError):
    pass


class NotSeparable(FrobdiffError):
    pass


class BadBasis(FrobdiffError):
    pass


class InsufficientJets(FrobdiffError):
    pass


class ZeroPolynomial(FrobdiffError):
    pass


class ConstantPolynomial(FrobdiffError):
    pass


class BadTwist(FrobdiffError):
    pass


class BadExponent(FrobdiffError):
    pass


class NotCoprime(FrobdiffError):
    pass


class LeaderMismatch(FrobdiffError):
    pass


class ShapeViolation(FrobdiffError):
    pass


class Exhausted(FrobdiffError):
    pass


class NotAnnihilator(FrobdiffError):
    pass


class SeparantVanishes(FrobdiffError):
    pass


class NotValidated(FrobdiffError):
    pass


class ParseError(FrobdiffError):
    """Syntax error in the expression or session grammar."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset
