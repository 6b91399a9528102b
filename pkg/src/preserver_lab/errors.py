"""Exception types shared across the package."""


class PreserverLabError(Exception):
    """Base class for every library-specific failure."""


class NotHermitian(PreserverLabError):
    pass


class NotPositiveDefinite(PreserverLabError):
    pass


class FactorizationError(PreserverLabError):
    pass


class ZeroInput(PreserverLabError):
    pass


class WitnessNotFound(PreserverLabError):
    pass


class DimensionMismatch(PreserverLabError):
    pass


class DegenerateUnit(PreserverLabError):
    pass


class NotUnital(PreserverLabError):
    pass


class NotLinear(PreserverLabError):
    pass


class NotCanonical(PreserverLabError):
    pass


class NotStarForm(PreserverLabError):
    pass


class SingularUnit(PreserverLabError):
    pass


class NotRankOne(PreserverLabError):
    pass


# Failures that mean "the black box is not a map of the canonical family",
# as opposed to malformed input.  The CLI maps these to exit code 3.
RECOVERY_ERRORS = (NotLinear, NotCanonical, NotStarForm, SingularUnit, NotRankOne)
