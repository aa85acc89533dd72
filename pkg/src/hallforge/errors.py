"""Exception hierarchy shared by all hallforge modules."""


class HallforgeError(Exception):
    """Base class for all errors raised by this package."""


class NonPrimeError(HallforgeError):
    """The requested field characteristic is not a prime number."""


class DegreeZeroError(HallforgeError):
    """The requested field extension degree is below 1."""


class DivideByZeroError(HallforgeError, ZeroDivisionError):
    """Multiplicative inverse of zero was requested."""


class DimensionError(HallforgeError):
    """Incompatible dimensions (e.g. a subspace larger than its ambient space)."""


class NotAdmissibleError(HallforgeError):
    """A relation violates the admissibility requirements (paths of length < 2,
    non-parallel or non-composable terms, or mixed path lengths)."""


class InfiniteDimensionalError(HallforgeError):
    """Path basis construction reached the length cutoff without the radical
    dying; the algebra is (or looks) infinite dimensional."""


class UnknownPresetError(HallforgeError):
    """No preset algebra with the requested name."""


class MixedContextError(HallforgeError):
    """Operands live over different algebras or different fields."""


class UndecidableError(HallforgeError):
    """A search-based decision (isomorphism, indecomposability) exceeded its
    budget; the caller should raise the budget or supply a catalog."""


class ZeroModuleError(HallforgeError):
    """Operation requires a nonzero module."""


class NotInCatalogError(HallforgeError):
    """A direct summand does not match any catalog entry."""


class NotIndecomposableError(HallforgeError):
    """A module assumed indecomposable turned out to be decomposable."""


class BudgetExceededError(HallforgeError):
    """An enumeration would exceed the configured candidate budget."""

    def __init__(self, message, dims=None):
        super().__init__(message)
        self.dims = dims


class CharacteristicMismatchError(HallforgeError):
    """Base change into a field of different characteristic."""


class NotPrimeBaseError(HallforgeError):
    """Operation requires a module defined over the prime field."""
