"""Exception types raised by the library.

All errors derive from :class:`HiggsError`, so callers (the CLI in
particular) can separate domain failures from programming errors.
"""


class HiggsError(Exception):
    """Base class for domain errors."""


class NotSymmetric(HiggsError, ValueError):
    """Period matrix is not symmetric within tolerance."""


class ImNotPositiveDefinite(HiggsError, ValueError):
    """Imaginary part of the period matrix is not positive definite.

    Attributes
    ----------
    pivot : int
        Index of the first non-positive Cholesky pivot.
    value : float
        Value of that pivot.
    """

    def __init__(self, message, pivot=-1, value=float("nan")):
        super().__init__(message)
        self.pivot = pivot
        self.value = value


class NotUnitary(HiggsError, ValueError):
    """Basis-change matrix is not unitary."""


class SingularLattice(HiggsError, ValueError):
    """Lattice generators are not linearly independent over the reals."""


class GenusTooLarge(HiggsError, ValueError):
    """Enumeration would be too large for the requested genus."""


class NotLatticeVector(HiggsError, ValueError):
    """A translation vector does not lie in the lattice."""


class FrameNotOrthonormal(HiggsError, ValueError):
    """Complex-structure frame is not orthonormal."""


class CoordinateMismatch(HiggsError, ValueError):
    """Points live in different coordinate systems or different genera."""


class NotUnitSphere(HiggsError, ValueError):
    """Quaternion is not a unit imaginary quaternion."""


class ChartError(HiggsError, ValueError):
    """A point is outside the domain of the requested chart."""
