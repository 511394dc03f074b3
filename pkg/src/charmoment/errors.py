"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InvalidModulusError(DomainError):
    """The modulus of a Jacobi symbol or character sum is even or nonpositive."""


class EmptyRangeError(DomainError):
    """A requested range has ``hi < lo``."""


class CapacityError(OverflowError):
    """Inputs exceed a supported integer width or enumeration budget."""


class UnsupportedModeError(DomainError):
    """The operation does not support the weight mode it was given."""
