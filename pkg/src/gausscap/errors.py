"""Exception hierarchy shared by all gausscap modules."""


class GaussCapError(ValueError):
    """Base class for every error raised by gausscap."""


class DomainError(GaussCapError):
    """Argument outside the mathematical domain of a function."""


class InvalidSymplecticError(GaussCapError):
    pass


class DegenerateError(GaussCapError):
    """Matrix is (numerically) rank deficient where full rank is required."""


class ZeroMatrixError(GaussCapError):
    pass


class InvalidChannelError(GaussCapError):
    """Triplet fails complete positivity or is malformed."""


class UnreducibleError(GaussCapError):
    """Canonical reduction failed its own verification."""


class ClassMismatchError(GaussCapError):
    pass


class InfeasibleEncodingError(GaussCapError):
    pass


class InfeasibleBudgetError(GaussCapError):
    """Energy budget below the vacuum level accepted by the bounds."""


class UnsupportedClassError(GaussCapError):
    pass
