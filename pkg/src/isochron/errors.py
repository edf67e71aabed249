"""Exception hierarchy shared by all isochron modules."""


class IsochronError(Exception):
    """Base class for every error raised by this package."""


# exact polynomial layer
class NonExactDivision(IsochronError, ArithmeticError):
    pass


class UndefinedGcd(IsochronError, ArithmeticError):
    pass


class NotLowestTerms(IsochronError, ValueError):
    pass


class NotReconstructible(IsochronError, ValueError):
    pass


# period function
class NoMinimumFound(IsochronError):
    pass


class AmbiguousWell(NoMinimumFound):
    """Several minima exist and no hint picks one of them."""


class NotAMinimum(IsochronError):
    pass


class EnergyOutOfRange(IsochronError, ValueError):
    pass


class QuadratureBudgetExceeded(IsochronError):
    pass


class NoBarrier(IsochronError):
    pass


# trajectories
class IntegrationError(IsochronError):
    pass


class StepUnderflow(IntegrationError):
    pass


class EnergyBlowup(IntegrationError):
    pass


class InsufficientCrossings(IsochronError):
    pass


# spectra
class ParameterRangeError(IsochronError, ValueError):
    pass


class GridTooCoarse(IsochronError):
    pass


class DomainTooSmall(IsochronError):
    pass


class MatchingFailure(IsochronError):
    pass


class AsymptoticCutoffTooLarge(IsochronError):
    pass


# input handling
class UnsupportedForExactClassification(IsochronError):
    pass


class SpecParseError(IsochronError, ValueError):
    pass
