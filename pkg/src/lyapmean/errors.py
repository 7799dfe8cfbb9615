"""Exception types shared across the package."""


class LyapMeanError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateMatrix(LyapMeanError, ValueError):
    """A matrix that must be invertible (or of full column rank) is not."""


class NotInvariant(LyapMeanError, ValueError):
    """A subspace is not mapped to itself by the given matrix."""


class NonGenericSpectrum(LyapMeanError, ValueError):
    """Eigenvalues collide within tolerance; invariant subspaces are not isolated."""


class InvalidPartition(LyapMeanError, ValueError):
    pass


class OddPartition(InvalidPartition):
    pass


class InvalidPoint(LyapMeanError, ValueError):
    pass
