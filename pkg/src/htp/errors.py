"""Exception hierarchy shared by every htp module."""


class HTPError(Exception):
    """Base class for all library errors."""


class DataError(HTPError):
    """Input data is unusable (bad vector, bad dataset row, bad token)."""


# modular arithmetic
class NotInvertible(HTPError, ArithmeticError):
    pass


class ResidueOutOfRange(HTPError, ValueError):
    pass


class InvalidBasis(HTPError, ValueError):
    pass


# codec
class TokenError(DataError, ValueError):
    pass


class TokenTooLong(TokenError):
    pass


class CodePointOutOfRange(TokenError):
    pass


class EmptyToken(TokenError):
    pass


class ContainsNull(TokenError):
    pass


class InvalidCodePoint(TokenError):
    pass


class DegeneratePhase(DataError, ValueError):
    pass


class CapacityWarning(UserWarning):
    """Basis capacity does not cover every token integer; decode is only exact mod M."""


# pooling
class EmptySentence(DataError, ValueError):
    pass


class ZeroWeightSum(DataError, ValueError):
    pass


class ZeroVector(DataError, ValueError):
    pass


class DimensionMismatch(DataError, ValueError):
    pass


# lexicon
class EmptyCorpus(DataError, ValueError):
    pass


# evaluation
class NoValidRows(DataError):
    pass


class ScoreOutOfRange(DataError, ValueError):
    pass


class ZeroVariance(DataError, ValueError):
    pass


class LengthMismatch(DataError, ValueError):
    pass
