"""Exception types shared across the package."""


class DopsError(Exception):
    """Base class for all library errors."""


class MissingCoefficient(DopsError, IndexError):
    """A recurrence coefficient beyond the stored horizon was requested."""


class RegularityViolation(DopsError, ValueError):
    """A last-band coefficient gamma^0 vanished."""


class NotGradedMonic(DopsError, ValueError):
    pass


class ZeroLambda(DopsError, ValueError):
    pass


class BadOffsets(DopsError, ValueError):
    pass


class BadSelector(DopsError, ValueError):
    pass


class UnsupportedD(DopsError, ValueError):
    pass


class ZeroAtOrigin(DopsError, ArithmeticError):
    """Some P_n(0) vanished, so the LU factorization of the Jacobi matrix breaks down."""


class Breakdown(DopsError, ArithmeticError):
    """A pivot of the UL factorization vanished."""


class FactorizationFailed(DopsError, ArithmeticError):
    pass


class SingularSystem(DopsError, ArithmeticError):
    pass


class MissingRho(DopsError, IndexError):
    pass


class NotDSymmetric(DopsError, ValueError):
    pass


class IndexOutOfRange(DopsError, IndexError):
    pass


class InconsistentFit(DopsError, ArithmeticError):
    pass


class SeriesDivisionByZero(DopsError, ZeroDivisionError):
    pass


class NotQuasi(DopsError, ValueError):
    pass


class DenominatorVanishes(DopsError, ZeroDivisionError):
    pass


class QRNoConvergence(DopsError, ArithmeticError):
    pass


class NonRealRoots(DopsError, ValueError):
    pass


class BadParameter(DopsError, ValueError):
    pass
