"""Exception hierarchy shared by every module of the package."""


class NilnikeError(Exception):
    """Base class; ``code`` is the machine-readable name used by the CLI."""

    @property
    def code(self) -> str:
        return type(self).__name__


# numtheory
class NonUnit(NilnikeError, ZeroDivisionError):
    pass


class NotASquare(NilnikeError, ValueError):
    pass


class BadBranch(NilnikeError, ValueError):
    pass


# group-core
class TooShort(NilnikeError, ValueError):
    pass


class CapExceeded(NilnikeError):
    pass


class TooLarge(NilnikeError):
    pass


# quaternion platform
class SamplingFailed(NilnikeError):
    pass


class NotNormOne(NilnikeError, ValueError):
    pass


class LevelTooLow(NilnikeError, ValueError):
    pass


class RelationError(NilnikeError):
    """The quaternion product violates one of its defining relations."""


# protocol
class ClassUnsupported(NilnikeError, ValueError):
    pass


class DegenerateGenerators(NilnikeError):
    pass


class MissingShare(NilnikeError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class SubsetTooSmall(NilnikeError, ValueError):
    pass


# attacks
class NotInSubgroup(NilnikeError):
    pass


class BudgetExceeded(NilnikeError):
    pass


class NoUnitCoordinate(NilnikeError):
    pass


class InsufficientPrecision(NilnikeError):
    pass


# configuration
class ConfigError(NilnikeError, ValueError):
    pass
