class DsPolyError(Exception):
    pass


class InvalidInputError(DsPolyError):
    pass


class ComputationError(DsPolyError):
    pass


class NegativeCount(InvalidInputError):
    pass


class EmptyCounts(InvalidInputError):
    pass


class DimensionMismatch(InvalidInputError):
    pass


class InvalidNullModel(InvalidInputError):
    pass


class InvalidConfig(InvalidInputError):
    pass


class InvalidConcentrations(InvalidInputError):
    pass


class InvalidTailPair(InvalidInputError):
    pass


class UnknownStatistic(InvalidInputError):
    pass


class MissingFallbackResolution(InvalidInputError):
    pass


class LatticeTooLarge(InvalidInputError):
    pass


class UnknownPolicy(InvalidInputError):
    pass


class EmptyWordSet(InvalidInputError):
    pass


class CorpusError(InvalidInputError):
    pass


class ScenarioError(InvalidInputError):
    pass
