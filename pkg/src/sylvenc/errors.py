"""Exception types raised by enclosure computations."""


class EnclosureError(Exception):
    """Base class for failures of verified computations in this package."""


class IntervalOverflowError(EnclosureError, ArithmeticError):
    """An interval operation produced a non-finite midpoint or radius."""


class SingularMatrixError(EnclosureError, ValueError):
    """A point matrix required to be invertible is singular or too close to it."""


class SingularPreconditionerError(SingularMatrixError):
    """A preconditioner denominator entry or pivot block is effectively zero."""


class EigenDecompositionError(EnclosureError, RuntimeError):
    """The eigenvalue iteration did not converge."""


class InconsistentEnclosureError(EnclosureError, ValueError):
    """An intersection of enclosures is empty; the iteration state is contradictory."""


class SizeCapError(EnclosureError, ValueError):
    """A dense baseline operation was requested above its size cap."""


class NoInitialEnclosureError(EnclosureError, ValueError):
    """Iterative refinement was started without any initial enclosure."""
