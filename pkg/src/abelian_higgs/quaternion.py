"""Quaternions, quaternionic vectors and the sphere of complex structures.

The complex numbers sit inside the quaternions as ``R1 + RI``. A vector of
``H^k`` is stored as a pair of complex k-vectors ``(q, p)`` standing for
``q + pJ``. Mixed products follow ``Jz = conj(z) J``.

Functions
---------
act
    Left action of a quaternion on ``H^k``.
real_matrix
    Real ``4k x 4k`` matrix of a left action.
stereo_chart1, stereo_chart2
    Complex structure at a point of the two affine charts of ``P^1``.
explicit_stereo1, explicit_stereo2
    Closed-form coefficients of the same complex structures.
antipode, antipode_chart, antipode_chart1
    The antipodal map on the sphere and in chart coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number

import numpy as np

from .errors import ChartError, NotUnitSphere

UNIT_TOL = 1e-9


@dataclass(frozen=True)
class Quaternion:
    """Real quaternion ``w + x I + y J + z K``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_complex(cls, c) -> "Quaternion":
        c = complex(c)
        return cls(c.real, c.imag, 0.0, 0.0)

    @classmethod
    def from_pair(cls, c1, c2) -> "Quaternion":
        """Build ``c1 + c2 J`` from two complex numbers."""
        c1, c2 = complex(c1), complex(c2)
        return cls(c1.real, c1.imag, c2.real, c2.imag)

    @property
    def pair(self) -> tuple[complex, complex]:
        """Complex pair ``(c1, c2)`` with ``self = c1 + c2 J``."""
        return complex(self.w, self.x), complex(self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)

    def inverse(self) -> "Quaternion":
        n2 = self.w**2 + self.x**2 + self.y**2 + self.z**2
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        c = self.conj()
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)

    def is_imaginary(self, tol=UNIT_TOL) -> bool:
        return abs(self.w) <= tol

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return quat_mul(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return quat_mul(other, self)


def _coerce(value):
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, Number):
        return Quaternion.from_complex(value)
    return NotImplemented


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product with ``IJ = K``, ``JK = I``, ``KI = J``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
QI = Quaternion(0.0, 1.0, 0.0, 0.0)
QJ = Quaternion(0.0, 0.0, 1.0, 0.0)
QK = Quaternion(0.0, 0.0, 0.0, 1.0)


def _frozen_complex(values) -> np.ndarray:
    arr = np.array(values, dtype=complex).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class QuaternionVector:
    """Element ``q + pJ`` of ``H^k``.

    Parameters
    ----------
    q, p : array_like
        Complex k-vectors.
    """

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = _frozen_complex(self.q)
        p = _frozen_complex(self.p)
        if q.shape != p.shape:
            raise ValueError(f"q and p lengths differ: {q.size} vs {p.size}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def k(self) -> int:
        return self.q.size

    @classmethod
    def zeros(cls, k: int) -> "QuaternionVector":
        return cls(np.zeros(k, complex), np.zeros(k, complex))

    @classmethod
    def from_real(cls, x) -> "QuaternionVector":
        """Inverse of :meth:`to_real`."""
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size % 4:
            raise ValueError("real vector length must be a multiple of 4")
        k = x.size // 4
        x1, y1, x2, y2 = x[:k], x[k:2 * k], x[2 * k:3 * k], x[3 * k:]
        return cls(x1 + 1j * y1, x2 + 1j * y2)

    def to_real(self) -> np.ndarray:
        """Real 4k-vector ``(x1, y1, x2, y2)`` with ``q = x1 + i y1`` and ``p = x2 + i y2``."""
        return np.concatenate([self.q.real, self.q.imag, self.p.real, self.p.imag])

    @classmethod
    def from_complex(cls, v) -> "QuaternionVector":
        """Split a complex 2k-vector ``[q; p]``."""
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.size % 2:
            raise ValueError("complex vector length must be even")
        k = v.size // 2
        return cls(v[:k], v[k:])

    def to_complex(self) -> np.ndarray:
        return np.concatenate([self.q, self.p])

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_complex()))

    def __add__(self, other):
        if not isinstance(other, QuaternionVector):
            return NotImplemented
        return QuaternionVector(self.q + other.q, self.p + other.p)

    def __sub__(self, other):
        if not isinstance(other, QuaternionVector):
            return NotImplemented
        return QuaternionVector(self.q - other.q, self.p - other.p)

    def __neg__(self):
        return QuaternionVector(-self.q, -self.p)

    def __mul__(self, scalar):
        # right multiplication by a real scalar only; complex scalars act on the left
        if isinstance(scalar, Number) and complex(scalar).imag == 0:
            s = float(complex(scalar).real)
            return QuaternionVector(s * self.q, s * self.p)
        return NotImplemented

    def __rmul__(self, scalar):
        if isinstance(scalar, (Quaternion, ComplexStructure, Number)):
            return act(scalar, self)
        return NotImplemented

    def __repr__(self):
        return f"QuaternionVector(q={self.q!r}, p={self.p!r})"


def act(u, v: QuaternionVector) -> QuaternionVector:
    """Left multiplication ``u (q + pJ)``.

    With ``u = c1 + c2 J`` this is ``(c1 q - c2 conj(p)) + (c1 p + c2 conj(q)) J``.

    Parameters
    ----------
    u : Quaternion, ComplexStructure or complex
    v : QuaternionVector

    Returns
    -------
    QuaternionVector
    """
    if isinstance(u, ComplexStructure):
        u = u.quaternion
    elif not isinstance(u, Quaternion):
        u = Quaternion.from_complex(u)
    c1, c2 = u.pair
    return QuaternionVector(c1 * v.q - c2 * np.conj(v.p), c1 * v.p + c2 * np.conj(v.q))


def real_matrix(u, k: int) -> np.ndarray:
    """Matrix of ``v -> act(u, v)`` on the real 4k-vectors of :meth:`QuaternionVector.to_real`."""
    n = 4 * k
    cols = [act(u, QuaternionVector.from_real(e)).to_real() for e in np.eye(n)]
    return np.array(cols).T


@dataclass(frozen=True)
class ComplexStructure:
    """Unit imaginary quaternion ``u_I I + u_J J + u_K K``.

    Raises
    ------
    NotUnitSphere
        If the coefficients are not of unit length within ``1e-9``.
    """

    u_I: float
    u_J: float
    u_K: float

    def __post_init__(self):
        for name in ("u_I", "u_J", "u_K"):
            object.__setattr__(self, name, float(getattr(self, name)))
        n = math.sqrt(self.u_I**2 + self.u_J**2 + self.u_K**2)
        if abs(n - 1.0) > UNIT_TOL:
            raise NotUnitSphere(f"|u| = {n!r} is not 1")

    @classmethod
    def from_vector(cls, vec, normalize=False) -> "ComplexStructure":
        vec = np.asarray(vec, dtype=float)
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(*vec)

    @classmethod
    def from_quaternion(cls, u: Quaternion, tol=UNIT_TOL) -> "ComplexStructure":
        if abs(u.w) > tol:
            raise NotUnitSphere(f"real part {u.w!r} is not zero")
        return cls(u.x, u.y, u.z)

    @property
    def quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.u_I, self.u_J, self.u_K)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.u_I, self.u_J, self.u_K])

    def __neg__(self):
        return ComplexStructure(-self.u_I, -self.u_J, -self.u_K)

    def cross(self, other: "ComplexStructure") -> "ComplexStructure":
        """Cross product of coefficient vectors, so ``I x J = K``."""
        return ComplexStructure.from_vector(np.cross(self.vector, other.vector))

    def dot(self, other: "ComplexStructure") -> float:
        return float(self.vector @ other.vector)

    def allclose(self, other: "ComplexStructure", tol=1e-12) -> bool:
        return bool(np.max(np.abs(self.vector - other.vector)) <= tol)


I_STRUCT = ComplexStructure(1.0, 0.0, 0.0)
J_STRUCT = ComplexStructure(0.0, 1.0, 0.0)
K_STRUCT = ComplexStructure(0.0, 0.0, 1.0)


def chart_conjugator(chart: int, coord) -> Quaternion:
    """Quaternion ``h`` with ``I_coord = h I h^-1`` in the given chart.

    Chart 1 uses ``1 + zeta K``, chart 2 uses ``conj(xi) + K``.
    """
    c = complex(coord)
    if chart == 1:
        return ONE + Quaternion.from_complex(c) * QK
    if chart == 2:
        return Quaternion.from_complex(c.conjugate()) + QK
    raise ChartError(f"unknown chart {chart!r}")


def conjugated_frame(chart: int, coord) -> tuple[ComplexStructure, ComplexStructure, ComplexStructure]:
    """Images of ``(I, J, K)`` under conjugation by :func:`chart_conjugator`."""
    h = chart_conjugator(chart, coord)
    hinv = h.inverse()
    return tuple(ComplexStructure.from_quaternion(h * b * hinv, tol=1e-8) for b in (QI, QJ, QK))


def _conjugate_I(chart, coord) -> ComplexStructure:
    h = chart_conjugator(chart, coord)
    return ComplexStructure.from_quaternion(h * QI * h.inverse(), tol=1e-8)


def stereo_chart1(zeta) -> ComplexStructure:
    """Complex structure ``(1 + zeta K) I (1 + zeta K)^-1``."""
    return _conjugate_I(1, zeta)


def stereo_chart2(xi) -> ComplexStructure:
    """Complex structure ``(conj(xi) + K) I (conj(xi) + K)^-1``."""
    return _conjugate_I(2, xi)


def explicit_stereo1(zeta) -> ComplexStructure:
    z = complex(zeta)
    d = 1.0 + abs(z) ** 2
    return ComplexStructure((1.0 - abs(z) ** 2) / d, 2 * z.real / d, 2 * z.imag / d)


def explicit_stereo2(xi) -> ComplexStructure:
    x = complex(xi)
    d = 1.0 + abs(x) ** 2
    return ComplexStructure(-(1.0 - abs(x) ** 2) / d, 2 * x.real / d, -2 * x.imag / d)


# --- batched kernels on arrays of shape (..., 4) ---------------------------------

def hamilton(a, b) -> np.ndarray:
    """Hamilton product of quaternion arrays ``(..., 4)`` in ``(w, x, y, z)`` order."""
    aw, ax, ay, az = np.moveaxis(np.asarray(a, dtype=float), -1, 0)
    bw, bx, by, bz = np.moveaxis(np.asarray(b, dtype=float), -1, 0)
    return np.stack([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ], axis=-1)


def conj_array(a) -> np.ndarray:
    return np.asarray(a, dtype=float) * np.array([1.0, -1.0, -1.0, -1.0])


def complex_array(c) -> np.ndarray:
    """Embed complex numbers as quaternions ``Re + Im I``."""
    c = np.asarray(c, dtype=complex)
    z = np.zeros(c.shape)
    return np.stack([c.real, c.imag, z, z], axis=-1)


def stereo_array(chart: int, coord) -> np.ndarray:
    """Coefficient vectors ``(..., 3)`` of ``h I h^-1`` for an array of chart coordinates."""
    c = np.asarray(coord, dtype=complex)
    k_unit = np.broadcast_to([0.0, 0.0, 0.0, 1.0], c.shape + (4,))
    if chart == 1:
        h = complex_array(np.ones_like(c)) + hamilton(complex_array(c), k_unit)
    elif chart == 2:
        h = complex_array(c.conj()) + k_unit
    else:
        raise ChartError(f"unknown chart {chart!r}")
    n2 = np.sum(h * h, axis=-1, keepdims=True)
    i_unit = np.broadcast_to([0.0, 1.0, 0.0, 0.0], h.shape)
    return (hamilton(hamilton(h, i_unit), conj_array(h)) / n2)[..., 1:]


def act_array(u, q, p):
    """Batched :func:`act`: quaternions ``u`` of shape ``(n, 4)`` on rows of ``q, p`` of shape ``(n, k)``."""
    u = np.asarray(u, dtype=float)
    c1 = (u[:, 0] + 1j * u[:, 1])[:, None]
    c2 = (u[:, 2] + 1j * u[:, 3])[:, None]
    return c1 * q - c2 * np.conj(p), c1 * p + c2 * np.conj(q)


def antipode(u: ComplexStructure) -> ComplexStructure:
    return -u


def antipode_chart(zeta) -> complex:
    """Chart-2 coordinate ``-conj(zeta)`` of the antipode of the chart-1 point ``zeta``."""
    return -complex(zeta).conjugate()


def antipode_chart1(zeta) -> complex:
    """Chart-1 coordinate ``-1/conj(zeta)`` of the antipode of the chart-1 point ``zeta``.

    Raises
    ------
    ChartError
        At ``zeta = 0``, whose antipode is the other pole.
    """
    z = complex(zeta)
    if z == 0:
        raise ChartError("antipode of zeta=0 is not in chart 1; use antipode_chart")
    return -1.0 / z.conjugate()
