"""Exception hierarchy shared by every module."""


class CampaignError(Exception):
    """Base class for all library errors."""


class ParseError(CampaignError):
    def __init__(self, message, position=None):
        self.message = message
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class UnknownVariable(ParseError):
    def __init__(self, name, position=None):
        self.name = name
        super().__init__(f"unknown variable {name!r}", position)


class VariableLimitExceeded(CampaignError):
    def __init__(self, n, limit):
        self.n = n
        self.limit = limit
        super().__init__(f"{n} variables exceeds the limit of {limit}")


class PopulationLimitExceeded(CampaignError):
    def __init__(self, count, limit):
        self.count = count
        self.limit = limit
        super().__init__(f"{count} pessimistic voters exceeds the limit of {limit}")


class InconsistentTheory(CampaignError):
    """The theory has no models, so utilities are undefined."""


class EmptyPopulation(CampaignError):
    pass


class MissingThreshold(CampaignError):
    pass


class UnsatisfiableSource(CampaignError):
    pass


class NotCNF(CampaignError):
    pass
