"""Exception types raised across the package."""


class ExchangeError(Exception):
    """Base class for all errors raised by exchange_clear."""


class InstanceError(ExchangeError, ValueError):
    """An instance violates one of the structural rules of the graph model."""


class LoopArc(InstanceError):
    pass


class ArcIntoNdd(InstanceError):
    pass


class DuplicateArc(InstanceError):
    pass


class VertexOutOfRange(InstanceError):
    pass


class NegativeWeight(InstanceError):
    pass


class BadProbability(InstanceError):
    pass


class InstanceSyntaxError(InstanceError):
    """The instance text is not well-formed JSON of the expected shape."""


class ArcNotInCopy(ExchangeError, ValueError):
    pass


class ModelTooLarge(ExchangeError):
    pass


class NddsPresent(ExchangeError, ValueError):
    pass


class CapTooSmallForReduced2(ExchangeError, ValueError):
    pass


class PositionOutOfSet(ExchangeError, ValueError):
    pass


class Unsupported(ExchangeError):
    pass


class InfeasibleAssignment(ExchangeError):
    """A solver assignment failed structural verification during decoding."""


class NumericalFailure(ExchangeError):
    pass


class LimitReached(ExchangeError):
    """A node or time limit stopped the search; ``partial`` holds the best result so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NegativeWeightInput(ExchangeError, ValueError):
    pass


class TooLargeForOracle(ExchangeError):
    pass


class BadFamilyParams(ExchangeError, ValueError):
    pass


class NotAClosedWalk(ExchangeError, ValueError):
    pass
