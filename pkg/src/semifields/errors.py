"""Exception types shared across the package."""


class SemifieldError(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(SemifieldError):
    pass


class ReducibleModulus(SemifieldError):
    pass


class DegreeMismatch(SemifieldError):
    pass


class DivisionByZero(SemifieldError):
    pass


class IndexOutOfRange(SemifieldError):
    pass


class NotADivisor(SemifieldError):
    pass


class ZeroArgument(SemifieldError):
    pass


class OrderNotDividing(SemifieldError):
    pass


class EmbeddingFailure(SemifieldError):
    pass


class CharTwoUnsupported(SemifieldError):
    pass


class DimensionMismatch(SemifieldError):
    pass


class KernelMismatch(SemifieldError):
    pass


class NotDirectSum(SemifieldError):
    pass


class InvalidL(SemifieldError):
    pass


class InvalidMu(SemifieldError):
    pass


class PolynomialHasRoot(SemifieldError):
    pass


class SigmaOutOfRange(SemifieldError):
    pass


class RInPowerSubgroup(SemifieldError):
    pass


class ConditionViolated(SemifieldError):
    pass


class WrongFamily(SemifieldError):
    pass


class InvalidTransformParams(SemifieldError):
    pass


class InvalidParams(SemifieldError):
    pass


class SingularLeftMultiplication(SemifieldError):
    pass


class OrderTooLarge(SemifieldError):
    pass


class LemmaMismatch(SemifieldError):
    """A closed-form value disagreed with its direct enumeration: implementation bug."""


class UnsupportedBranch(SemifieldError):
    pass
