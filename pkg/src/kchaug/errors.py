"""Exception types shared across the package."""


class KCHError(Exception):
    """Base class for all package errors."""


class RankMismatchError(KCHError, ValueError):
    pass


class MissingImageError(KCHError, KeyError):
    pass


class TermBudgetExceeded(KCHError, MemoryError):
    """An operation produced more terms than the configured budget allows."""


class ExtractionShapeError(KCHError):
    """A monomial did not have the single rank-extending letter expected in it."""


class MultiComponentClosure(KCHError, ValueError):
    pass


class NoConvergence(KCHError):
    """Every Newton start failed to reach the requested tolerance."""


class RootSelectionFailure(KCHError):
    pass


class EigenvalueCollision(KCHError):
    pass


class NotARepresentation(KCHError):
    pass


class AbelianDegenerate(KCHError):
    pass


class NoRoot(KCHError):
    pass


class RNotZero(KCHError):
    pass


class AlreadyIrreducible(KCHError):
    pass
