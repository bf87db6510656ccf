"""Exception hierarchy shared by every latpair module."""


class LatPairError(Exception):
    """Base class for all library errors."""


class SingularMatrix(LatPairError, ArithmeticError):
    pass


class DimensionMismatch(LatPairError, ValueError):
    pass


class RadicandMismatch(LatPairError, ValueError):
    pass


class NonIntegralInput(LatPairError, ValueError):
    pass


class BothZero(LatPairError, ValueError):
    pass


class VolumeMismatch(LatPairError, ValueError):
    pass


class BoxTooLarge(LatPairError, RuntimeError):
    def __init__(self, cells, limit):
        super().__init__(f"enumeration box has {cells} cells, limit is {limit}")
        self.cells = cells
        self.limit = limit


class MinkowskiViolation(LatPairError, AssertionError):
    """A nonzero lattice point sits strictly inside a box that passed the open-box test."""


class NotUnipotent(LatPairError, ValueError):
    pass


class NotUnimodularIntegral(LatPairError, ValueError):
    pass


class ZeroParameter(LatPairError, ValueError):
    pass


class NotCoprime(LatPairError, ValueError):
    pass


class InternalIdentityFailure(LatPairError, AssertionError):
    pass


class ConstructionFailure(LatPairError, AssertionError):
    """A constructed witness failed post-verification."""


class PerfectSquareRadicand(LatPairError, ValueError):
    pass


class DimensionNot2(LatPairError, ValueError):
    pass


class ParseError(LatPairError, ValueError):
    def __init__(self, message, row=None, column=None):
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.row = row
        self.column = column
