"""Exception hierarchy."""


class MatroidCSMError(Exception):
    """Base class for every error raised by this package."""


class AxiomViolation(MatroidCSMError, ValueError):
    def __init__(self, axiom, a, b, message=None):
        self.axiom = axiom
        self.pair = (a, b)
        super().__init__(message or f"rank axiom {axiom} violated at A={a:#b}, B={b:#b}")


class EmptyBases(MatroidCSMError, ValueError):
    pass


class NonEquicardinalBases(MatroidCSMError, ValueError):
    pass


class OutOfRange(MatroidCSMError, IndexError):
    pass


class ParseError(MatroidCSMError, ValueError):
    pass


class HasLoop(MatroidCSMError, ValueError):
    pass


class IsColoop(MatroidCSMError, ValueError):
    pass


class WrongDegree(MatroidCSMError, ValueError):
    pass


class DegreeOverflow(MatroidCSMError, ValueError):
    pass


class FlagNotMaximal(MatroidCSMError, ValueError):
    pass


class NonUnimodularQuotient(MatroidCSMError, ArithmeticError):
    pass


class InconsistentDegreeMap(MatroidCSMError, ArithmeticError):
    pass


class UnbalancedInput(MatroidCSMError, ValueError):
    pass


class NonUniqueLift(MatroidCSMError, ArithmeticError):
    pass


class NoBalancedLift(MatroidCSMError, ArithmeticError):
    pass


class RouteMismatch(MatroidCSMError, ArithmeticError):
    pass


class UnknownIdentity(MatroidCSMError, KeyError):
    pass
