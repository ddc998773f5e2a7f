"""Exception hierarchy.  Every domain error carries a short machine-readable name."""


class CubixError(Exception):
    """Base class for all domain errors raised by cubix."""

    @property
    def name(self) -> str:
        return type(self).__name__


class DivisionByZero(CubixError, ZeroDivisionError):
    pass


class FieldMismatch(CubixError, TypeError):
    pass


class FactorizationBoundExceeded(CubixError):
    pass


class ZeroElement(CubixError, ValueError):
    pass


class NotAnExtension(CubixError, TypeError):
    pass


class InvalidField(CubixError, ValueError):
    pass


class ParseError(CubixError, ValueError):
    pass


class SingularMatrix(CubixError, ValueError):
    pass


class NotTraceless(CubixError, ValueError):
    pass


class NotSl2(CubixError, ValueError):
    pass


class ZeroMatrix(CubixError, ValueError):
    pass


class ZeroCubic(CubixError, ValueError):
    pass


class NotTripleRoot(CubixError, ValueError):
    pass


class NotDoubleRoot(CubixError, ValueError):
    pass


class NotGeneric(CubixError, ValueError):
    pass


class NotGenericSquare(NotGeneric):
    pass


class NotGenericNonSquare(NotGeneric):
    pass


class QMismatch(CubixError, ValueError):
    pass


class DiscriminantMismatch(CubixError, ValueError):
    pass


class MixedStrata(CubixError, ValueError):
    pass


class GenericInput(CubixError, ValueError):
    pass


class Irreducible(CubixError, ValueError):
    pass


class MultipleRoot(CubixError, ValueError):
    pass


class FieldTooLarge(CubixError, ValueError):
    pass


class NotPrimeField(CubixError, TypeError):
    pass
