"""Betti, de Rham and Dolbeault coordinates on the rank-one moduli space.

All periods are taken relative to the normalized basis of holomorphic
differentials (A-periods the identity, B-periods ``Pi``).

* Betti: characters ``(rhoA, rhoB)`` in ``(C*)^(2k)``.
* de Rham: periods ``(a, b)`` of a harmonic 1-form, modulo ``2 pi i Z^(2k)``.
* Dolbeault: ``(q, p)`` where ``Psi = sum q_j conj(omega_j)`` is the
  deformation of the holomorphic structure, taken modulo the lattice
  ``pi Im(Pi)^-1 (Z^k + Pi Z^k)``, and ``Phi = sum p_j omega_j`` is the
  Higgs field.

The de Rham and Dolbeault descriptions are related by splitting a harmonic
form ``eta = Psi - conj(Psi) + Phi + conj(Phi)``, which on periods gives::

    a = 2i Im(q) + 2 Re(p)
    b = 2i (X Im(q) - Y Re(q)) + 2 (X Re(p) - Y Im(p))

with ``X = Re(Pi)`` and ``Y = Im(Pi)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import CoordinateMismatch
from .period_matrix import LATTICE_TOL, Lattice, PeriodMatrix, as_period_matrix, cup_product

TWO_PI = 2.0 * np.pi
# imaginary parts this close below 2 pi are wrapped to 0
WRAP_TOL = 1e-12


def _vec(values) -> np.ndarray:
    arr = np.array(values, dtype=complex).reshape(-1)
    arr.setflags(write=False)
    return arr


def _pair(cls, first, second):
    a, b = _vec(first), _vec(second)
    if a.shape != b.shape:
        raise CoordinateMismatch(f"{cls.__name__} blocks have lengths {a.size} and {b.size}")
    return a, b


@dataclass(frozen=True, eq=False)
class BettiPoint:
    """Character with values ``rhoA[j] = rho(A_j)`` and ``rhoB[j] = rho(B_j)``."""

    rhoA: np.ndarray
    rhoB: np.ndarray
    system = "betti"

    def __post_init__(self):
        a, b = _pair(type(self), self.rhoA, self.rhoB)
        if np.any(a == 0) or np.any(b == 0):
            raise ValueError("character values must be nonzero")
        object.__setattr__(self, "rhoA", a)
        object.__setattr__(self, "rhoB", b)

    @property
    def k(self) -> int:
        return self.rhoA.size

    @property
    def values(self) -> np.ndarray:
        return np.concatenate([self.rhoA, self.rhoB])

    @classmethod
    def from_values(cls, values) -> "BettiPoint":
        v = _vec(values)
        return cls(v[: v.size // 2], v[v.size // 2:])


@dataclass(frozen=True, eq=False)
class DeRhamPoint:
    """Periods ``a[j]`` over ``A_j`` and ``b[j]`` over ``B_j`` of a harmonic form."""

    a: np.ndarray
    b: np.ndarray
    system = "derham"

    def __post_init__(self):
        a, b = _pair(type(self), self.a, self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def k(self) -> int:
        return self.a.size

    @property
    def periods(self) -> np.ndarray:
        return np.concatenate([self.a, self.b])

    @classmethod
    def from_periods(cls, periods) -> "DeRhamPoint":
        v = _vec(periods)
        return cls(v[: v.size // 2], v[v.size // 2:])

    def canonical(self) -> "DeRhamPoint":
        """Representative with every imaginary part in ``[0, 2 pi)``."""
        v = self.periods
        return DeRhamPoint.from_periods(v.real + 1j * wrap_angle(v.imag))


@dataclass(frozen=True, eq=False)
class DolbeaultPoint:
    """Pair ``(q, p)``; ``q`` matters modulo the lattice of :func:`q_lattice`."""

    q: np.ndarray
    p: np.ndarray
    system = "dolbeault"

    def __post_init__(self):
        q, p = _pair(type(self), self.q, self.p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def k(self) -> int:
        return self.q.size

    def jacobian_coordinate(self, Pi) -> np.ndarray:
        """Coordinate ``z = Im(Pi) q / pi``, defined modulo ``Z^k + Pi Z^k``."""
        P = as_period_matrix(Pi)
        return P.Y @ self.q / np.pi

    def canonical(self, Pi, tol: float = LATTICE_TOL) -> "DolbeaultPoint":
        rep, _ = q_lattice(Pi).reduce(self.q, tol)
        return DolbeaultPoint(rep.q, self.p)


ModuliPoint = BettiPoint | DeRhamPoint | DolbeaultPoint


def wrap_angle(theta) -> np.ndarray:
    """Reduce real angles into ``[0, 2 pi)``."""
    r = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    r = np.where(r >= TWO_PI - WRAP_TOL, 0.0, r)
    return r


def q_lattice(Pi) -> Lattice:
    """The lattice ``pi Im(Pi)^-1 (Z^k + Pi Z^k)`` of flat unitary connections."""
    return Lattice.higgs_lattice(as_period_matrix(Pi))


# --- words in the fundamental group -------------------------------------------

@dataclass(frozen=True)
class Word:
    """Word in the generators ``A_1, B_1, ..., A_k, B_k``.

    Letters are ``(index, exponent)`` with ``index = 2j - 1`` for ``A_j`` and
    ``index = 2j`` for ``B_j``, following the order of the standard
    presentation.
    """

    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        letters = tuple((int(i), int(e)) for i, e in self.letters)
        for i, _ in letters:
            if i < 1:
                raise ValueError(f"generator index must be >= 1, got {i}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse text such as ``"A1 B1^-1 A2^3"``."""
        letters = []
        for token in text.split():
            m = re.fullmatch(r"([AB])(\d+)(?:\^(-?\d+))?", token)
            if m is None:
                raise ValueError(f"bad letter {token!r}")
            j = int(m.group(2))
            letters.append((2 * j - 1 if m.group(1) == "A" else 2 * j, int(m.group(3) or 1)))
        return cls(tuple(letters))

    @classmethod
    def relator(cls, k: int) -> "Word":
        """``[A_1, B_1] ... [A_k, B_k]`` with ``[x, y] = x y x^-1 y^-1``."""
        letters = []
        for j in range(1, k + 1):
            letters += [(2 * j - 1, 1), (2 * j, 1), (2 * j - 1, -1), (2 * j, -1)]
        return cls(tuple(letters))


def evaluate_word(rho: BettiPoint, w: Word) -> complex:
    """Value of a character on a word."""
    value = 1.0 + 0.0j
    for index, exponent in w.letters:
        j, is_b = divmod(index - 1, 2)
        if j >= rho.k:
            raise ValueError(f"generator index {index} exceeds 2k = {2 * rho.k}")
        value *= (rho.rhoB if is_b else rho.rhoA)[j] ** exponent
    return complex(value)


# --- Betti and de Rham -----------------------------------------------------------

def holonomy(d: DeRhamPoint) -> BettiPoint:
    """Character ``gamma -> exp(integral of eta over gamma)``."""
    return BettiPoint(np.exp(d.a), np.exp(d.b))


def log_holonomy(b: BettiPoint) -> DeRhamPoint:
    """Principal logarithm with imaginary parts in ``[0, 2 pi)``."""
    v = b.values
    return DeRhamPoint.from_periods(np.log(np.abs(v)) + 1j * wrap_angle(np.angle(v)))


def betti_decompose(b: BettiPoint):
    """Split a character into its unitary part and the logs of its moduli.

    Returns
    -------
    unitary : BettiPoint
        ``rho / |rho|`` entrywise.
    logs : ndarray
        Real 2k-vector ``(log|rho(A_1)|, ..., log|rho(B_k)|)`` in A-then-B order.
    """
    v = b.values
    r = np.abs(v)
    return BettiPoint.from_values(v / r), np.log(r)


def betti_symplectic(rho: BettiPoint, u, v) -> complex:
    """Holomorphic symplectic form at ``rho`` on tangent vectors ``u, v``.

    Tangent vectors are derivatives of the 2k character values; the form
    is the cup product of the logarithmic tangents ``u / rho`` and ``v / rho``.
    """
    vals = rho.values
    return cup_product(np.asarray(u) / vals, np.asarray(v) / vals)


# --- de Rham and Dolbeault ---------------------------------------------------------

def higgs_to_periods(q, p, Pi) -> tuple[np.ndarray, np.ndarray]:
    """Periods ``(a, b)`` of ``Psi - conj(Psi) + Phi + conj(Phi)``. Real-linear, no reduction."""
    P = as_period_matrix(Pi)
    q = np.asarray(q, dtype=complex)
    p = np.asarray(p, dtype=complex)
    X, Y = P.X, P.Y
    a = 2j * q.imag + 2 * p.real
    b = 2j * (X @ q.imag - Y @ q.real) + 2 * (X @ p.real - Y @ p.imag)
    return a, b


def periods_to_higgs(a, b, Pi) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`higgs_to_periods`."""
    P = as_period_matrix(Pi)
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    X, Yi = P.X, P.Y_inv
    im_q = a.imag / 2
    re_q = Yi @ (X @ im_q - b.imag / 2)
    alpha = a.real / 2
    beta = b.real / 2
    re_p = alpha
    im_p = Yi @ (X @ alpha - beta)
    return re_q + 1j * im_q, re_p + 1j * im_p


def derham_to_dolbeault(d: DeRhamPoint, Pi, tol: float = LATTICE_TOL) -> DolbeaultPoint:
    """Split a harmonic form into ``(Psi, Phi)``; ``q`` is reduced modulo its lattice."""
    _check_k(d, Pi)
    q, p = periods_to_higgs(d.a, d.b, Pi)
    return DolbeaultPoint(q, p).canonical(Pi, tol)


def dolbeault_to_derham(x: DolbeaultPoint, Pi) -> DeRhamPoint:
    """Periods of ``Psi - conj(Psi) + Phi + conj(Phi)`` in canonical form."""
    _check_k(x, Pi)
    a, b = higgs_to_periods(x.q, x.p, Pi)
    return DeRhamPoint(a, b).canonical()


def _check_k(x, Pi):
    P = as_period_matrix(Pi)
    if x.k != P.k:
        raise CoordinateMismatch(f"point has k={x.k} but period matrix has k={P.k}")


def convert(x, system: str, Pi=None, tol: float = LATTICE_TOL):
    """Express a moduli point in another coordinate system.

    Parameters
    ----------
    x : BettiPoint, DeRhamPoint or DolbeaultPoint
    system : {"betti", "derham", "dolbeault"}
    Pi : period matrix, required whenever Dolbeault coordinates are involved
    """
    if system not in ("betti", "derham", "dolbeault"):
        raise ValueError(f"unknown coordinate system {system!r}")
    if x.system == system:
        if system == "derham":
            return x.canonical()
        if system == "dolbeault":
            return x.canonical(Pi, tol)
        return x
    d = log_holonomy(x) if x.system == "betti" else (
        dolbeault_to_derham(x, Pi) if x.system == "dolbeault" else x.canonical())
    if system == "derham":
        return d
    if system == "betti":
        return holonomy(d)
    return derham_to_dolbeault(d, Pi, tol)


def derham_distance(d1: DeRhamPoint, d2: DeRhamPoint) -> float:
    """Distance modulo ``2 pi i Z^(2k)``."""
    diff = d1.periods - d2.periods
    im = np.mod(diff.imag + np.pi, TWO_PI) - np.pi
    return float(np.linalg.norm(diff.real + 1j * im))


def dolbeault_distance(x1: DolbeaultPoint, x2: DolbeaultPoint, Pi) -> float:
    """Distance with ``q`` compared modulo its lattice."""
    L = q_lattice(Pi)
    c = L.coordinates(x1.q - x2.q)
    dq = L.point(c - np.round(c))
    return float(np.linalg.norm(np.concatenate([dq, x1.p - x2.p])))


def betti_distance(b1: BettiPoint, b2: BettiPoint) -> float:
    return float(np.linalg.norm(b1.values - b2.values))


def distance(x1, x2, Pi=None) -> float:
    """Distance between two points of the same system, modulo the relevant lattice."""
    if x1.system != x2.system:
        raise CoordinateMismatch(f"cannot compare {x1.system} with {x2.system}")
    if x1.system == "betti":
        return betti_distance(x1, x2)
    if x1.system == "derham":
        return derham_distance(x1, x2)
    return dolbeault_distance(x1, x2, Pi)


# --- group law, real structures, flows ----------------------------------------------

def group_law(x1, x2, Pi=None, tol: float = LATTICE_TOL):
    """Tensor product of rank-one objects in a single coordinate system.

    Betti points multiply, de Rham and Dolbeault points add and are reduced.
    ``Pi`` is needed only for Dolbeault reduction.

    Raises
    ------
    CoordinateMismatch
        If the points use different systems or different genera.
    """
    if x1.system != x2.system:
        raise CoordinateMismatch(f"cannot combine {x1.system} with {x2.system}")
    if x1.k != x2.k:
        raise CoordinateMismatch(f"genus mismatch: {x1.k} vs {x2.k}")
    if x1.system == "betti":
        return BettiPoint(x1.rhoA * x2.rhoA, x1.rhoB * x2.rhoB)
    if x1.system == "derham":
        return DeRhamPoint(x1.a + x2.a, x1.b + x2.b).canonical()
    if Pi is None:
        raise ValueError("Dolbeault group law needs the period matrix")
    return DolbeaultPoint(x1.q + x2.q, x1.p + x2.p).canonical(Pi, tol)


def identity_point(system: str, k: int):
    z = np.zeros(k, complex)
    if system == "betti":
        return BettiPoint(np.ones(k), np.ones(k))
    if system == "derham":
        return DeRhamPoint(z, z)
    return DolbeaultPoint(z, z)


def real_structure(x, which: str, Pi=None, tol: float = LATTICE_TOL):
    """Apply ``iota_U`` or ``iota_R``.

    ``iota_U`` fixes the unitary characters; ``iota_R`` fixes the real ones.

    ======== ===================== ===================
    system   iota_U                iota_R
    ======== ===================== ===================
    betti    ``1 / conj(rho)``     ``conj(rho)``
    derham   ``-conj(a, b)``       ``conj(a, b)``
    dolbeault ``(q, -p)``           ``(-q, p)``
    ======== ===================== ===================
    """
    which = which.upper()
    if which not in ("U", "R"):
        raise ValueError(f"real structure must be 'U' or 'R', got {which!r}")
    if x.system == "betti":
        v = x.values
        return BettiPoint.from_values(1.0 / v.conj() if which == "U" else v.conj())
    if x.system == "derham":
        v = x.periods.conj()
        return DeRhamPoint.from_periods(-v if which == "U" else v).canonical()
    if Pi is None:
        raise ValueError("Dolbeault real structures need the period matrix")
    if which == "U":
        return DolbeaultPoint(x.q, -x.p).canonical(Pi, tol)
    return DolbeaultPoint(-x.q, x.p).canonical(Pi, tol)


real_structures = real_structure


def hamiltonian_flow(x, n: int, t: float):
    """Flow of the circle action rotating ``B_1``: ``rho(B_1) -> rho(B_1) exp(i n t)``.

    Accepts Betti points, or de Rham points, where ``b_1`` is shifted by ``i n t``.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be a non-negative integer")
    if x.system == "betti":
        rhoB = np.array(x.rhoB)
        rhoB[0] = rhoB[0] * np.exp(1j * n * t)
        return BettiPoint(x.rhoA, rhoB)
    if x.system == "derham":
        b = np.array(x.b)
        b[0] = b[0] + 1j * n * t
        return DeRhamPoint(x.a, b).canonical()
    raise CoordinateMismatch("the B_1 flow is defined on Betti or de Rham points")


def hitchin_map(x: DolbeaultPoint) -> np.ndarray:
    """Projection ``(q, p) -> p``."""
    return np.array(x.p)
