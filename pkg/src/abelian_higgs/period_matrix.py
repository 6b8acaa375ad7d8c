"""Period matrices, their lattices and the torus ``C^k / L``.

A period matrix ``Pi`` is symmetric with positive definite imaginary part.
From it we build the normalized full period matrices ``(A, B)`` of a
unitary basis of holomorphic differentials, the cup product on period
vectors and lattices ``scale * (Z^k + Pi Z^k)`` with reduction to a
canonical fundamental domain.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (GenusTooLarge, ImNotPositiveDefinite, NotSymmetric,
                     NotUnitary, SingularLattice)

SYMMETRY_TOL = 1e-9
LATTICE_TOL = 1e-9
MAX_TORSION_GENUS = 12


@dataclass(frozen=True, eq=False)
class PeriodMatrix:
    """Validated period matrix. Build it with :func:`validate`."""

    Pi: np.ndarray

    @property
    def k(self) -> int:
        return self.Pi.shape[0]

    @property
    def X(self) -> np.ndarray:
        """Real part of ``Pi``."""
        return self.Pi.real

    @property
    def Y(self) -> np.ndarray:
        """Imaginary part of ``Pi``."""
        return self.Pi.imag

    @cached_property
    def Y_inv(self) -> np.ndarray:
        return np.linalg.inv(self.Y)

    @cached_property
    def sqrt_2Y(self) -> np.ndarray:
        """Positive definite square root of ``2 Im(Pi)``."""
        return sqrtm_pd(2.0 * self.Y)


def as_period_matrix(Pi) -> PeriodMatrix:
    """Return ``Pi`` unchanged if already validated, else validate it."""
    if isinstance(Pi, PeriodMatrix):
        return Pi
    return validate(Pi)


def cholesky(A: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Lower-triangular Cholesky factor of a real symmetric matrix.

    Raises
    ------
    ImNotPositiveDefinite
        At the first pivot not exceeding ``tol * max(1, max|A|)``. The
        exception carries the pivot index and value as a witness.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    floor = tol * max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
    L = np.zeros_like(A)
    for j in range(n):
        d = A[j, j] - L[j, :j] @ L[j, :j]
        if not d > floor:
            raise ImNotPositiveDefinite(
                f"Im(Pi) is not positive definite: Cholesky pivot {j} is {d!r}",
                pivot=j, value=float(d))
        L[j, j] = np.sqrt(d)
        for i in range(j + 1, n):
            L[i, j] = (A[i, j] - L[i, :j] @ L[j, :j]) / L[j, j]
    return L


def validate(Pi) -> PeriodMatrix:
    """Check the Riemann bilinear relations for ``Pi``.

    Parameters
    ----------
    Pi : array_like
        Square complex matrix.

    Returns
    -------
    PeriodMatrix

    Raises
    ------
    NotSymmetric
        If ``||Pi - Pi^T||_inf > 1e-9 ||Pi||_inf``.
    ImNotPositiveDefinite
        If the Cholesky factorization of ``Im(Pi)`` fails.
    """
    Pi = np.array(Pi, dtype=complex)
    if Pi.ndim != 2 or Pi.shape[0] != Pi.shape[1] or Pi.shape[0] == 0:
        raise ValueError(f"period matrix must be square and non-empty, got shape {Pi.shape}")
    asym = np.linalg.norm(Pi - Pi.T, np.inf)
    if asym > SYMMETRY_TOL * np.linalg.norm(Pi, np.inf):
        raise NotSymmetric(f"Pi is not symmetric: ||Pi - Pi^T||_inf = {float(asym)!r}")
    # symmetrize away the admissible rounding
    Pi = 0.5 * (Pi + Pi.T)
    cholesky(Pi.imag)
    Pi.setflags(write=False)
    return PeriodMatrix(Pi)


def jacobi_eigh(S: np.ndarray, tol: float = 1e-15, max_sweeps: int = 64):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    V : ndarray
        Orthogonal matrix whose columns are the matching eigenvectors.
    """
    A = np.array(S, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A)
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if np.linalg.norm(A[offdiag]) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                # negligible against both diagonal entries: drop it
                if abs(apq) <= 1e-18 * min(abs(A[p, p]), abs(A[q, q])):
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                Ap, Aq = A[:, p].copy(), A[:, q].copy()
                A[:, p], A[:, q] = c * Ap - s * Aq, s * Ap + c * Aq
                Ap, Aq = A[p, :].copy(), A[q, :].copy()
                A[p, :], A[q, :] = c * Ap - s * Aq, s * Ap + c * Aq
                Vp, Vq = V[:, p].copy(), V[:, q].copy()
                V[:, p], V[:, q] = c * Vp - s * Vq, s * Vp + c * Vq
    w = np.diag(A).copy()
    order = np.argsort(w)
    return w[order], V[:, order]


def sqrtm_pd(S: np.ndarray) -> np.ndarray:
    """Positive definite symmetric square root of a positive definite matrix."""
    w, V = jacobi_eigh(S)
    if np.any(w <= 0):
        raise ImNotPositiveDefinite("matrix is not positive definite", value=float(w[0]))
    R = (V * np.sqrt(w)) @ V.T
    return 0.5 * (R + R.T)


def inv_sqrtm_pd(S: np.ndarray) -> np.ndarray:
    w, V = jacobi_eigh(S)
    if np.any(w <= 0):
        raise ImNotPositiveDefinite("matrix is not positive definite", value=float(w[0]))
    R = (V / np.sqrt(w)) @ V.T
    return 0.5 * (R + R.T)


@dataclass(frozen=True, eq=False)
class FullPeriodMatrix:
    """A-periods ``A[j, l]`` and B-periods ``B[j, l]`` of differentials ``omega_j``."""

    A: np.ndarray
    B: np.ndarray

    def symmetric_residual(self) -> float:
        """Size of ``A B^T - B A^T``."""
        return float(np.max(np.abs(self.A @ self.B.T - self.B @ self.A.T)))

    def hermitian_residual(self) -> float:
        """Distance of ``A B^H - B A^H`` from ``-i Id``."""
        k = self.A.shape[0]
        M = self.A @ self.B.conj().T - self.B @ self.A.conj().T
        return float(np.max(np.abs(M + 1j * np.eye(k))))


def unitary_periods(Pi, U=None, tol: float = 1e-9) -> FullPeriodMatrix:
    """Periods of a unitary basis of holomorphic differentials.

    ``A = U (2 Im Pi)^(-1/2)`` and ``B = A Pi``. With ``U = Id`` the basis is
    the orthonormalization of the normalized basis.

    Raises
    ------
    NotUnitary
        If ``U U^H`` differs from the identity by more than ``tol``.
    """
    P = as_period_matrix(Pi)
    k = P.k
    if U is None:
        U = np.eye(k, dtype=complex)
    U = np.asarray(U, dtype=complex)
    if U.shape != (k, k) or np.max(np.abs(U @ U.conj().T - np.eye(k))) > tol:
        raise NotUnitary("basis change matrix is not unitary")
    A = U @ inv_sqrtm_pd(2.0 * P.Y)
    return FullPeriodMatrix(A, A @ P.Pi)


def symplectic_matrix(k: int) -> np.ndarray:
    """Standard ``[[0, Id], [-Id, 0]]``."""
    Z, E = np.zeros((k, k)), np.eye(k)
    return np.block([[Z, E], [-E, Z]])


def cup_product(u, v) -> complex:
    """Cup product of two classes given by period vectors (A-periods first).

    ``sum_j u(A_j) v(B_j) - u(B_j) v(A_j)``
    """
    u = np.asarray(u, dtype=complex).reshape(-1)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if u.size != v.size or u.size % 2:
        raise ValueError("period vectors must have equal even length")
    k = u.size // 2
    return complex(np.sum(u[:k] * v[k:] - u[k:] * v[:k]))


@dataclass(frozen=True, eq=False)
class Lattice:
    """Lattice in ``C^k`` spanned over Z by the columns of ``scale * basis``.

    Parameters
    ----------
    basis : ndarray, shape (k, 2k)
    scale : complex
    """

    basis: np.ndarray
    scale: complex = 1.0

    def __post_init__(self):
        basis = np.array(self.basis, dtype=complex)
        if basis.ndim != 2 or basis.shape[1] != 2 * basis.shape[0]:
            raise ValueError(f"basis must be k x 2k, got {basis.shape}")
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "scale", complex(self.scale))
        R = self.real_matrix
        if not np.all(np.isfinite(R)) or np.linalg.cond(R) > 1e12:
            raise SingularLattice("lattice generators are not independent over R")

    @classmethod
    def period_lattice(cls, Pi, scale=1.0) -> "Lattice":
        """``scale * (Z^k + Pi Z^k)``."""
        P = as_period_matrix(Pi)
        return cls(np.hstack([np.eye(P.k), P.Pi]), scale)

    @classmethod
    def higgs_lattice(cls, Pi) -> "Lattice":
        """``pi Im(Pi)^-1 (Z^k + Pi Z^k)``, the lattice of flat unitary connections in q."""
        P = as_period_matrix(Pi)
        return cls(P.Y_inv @ np.hstack([np.eye(P.k), P.Pi]), np.pi)

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def generators(self) -> np.ndarray:
        return self.scale * self.basis

    @cached_property
    def real_matrix(self) -> np.ndarray:
        G = self.scale * self.basis
        return np.vstack([G.real, G.imag])

    def coordinates(self, q) -> np.ndarray:
        """Real coordinates ``c`` with ``q = generators @ c``."""
        q = np.asarray(q, dtype=complex).reshape(-1)
        if q.size != self.k:
            raise ValueError(f"expected a {self.k}-vector, got length {q.size}")
        return np.linalg.solve(self.real_matrix, np.concatenate([q.real, q.imag]))

    def point(self, coords) -> np.ndarray:
        return self.generators @ np.asarray(coords, dtype=float)

    def reduce(self, q, tol: float = LATTICE_TOL):
        """Canonical representative of ``q`` modulo the lattice.

        Returns
        -------
        point : JacobianPoint
            Representative with every real coordinate in ``[0, 1 - tol)``.
        removed : ndarray of int
            Integer coordinates with ``q = point.q + generators @ removed``.
        """
        c = self.coordinates(q)
        n = np.floor(c)
        frac = c - n
        wrap = frac >= 1.0 - tol
        frac[wrap] = 0.0
        n[wrap] += 1
        return JacobianPoint(self.point(frac), self), n.astype(np.int64)

    def is_member(self, q, tol: float = LATTICE_TOL) -> bool:
        c = self.coordinates(q)
        return bool(np.all(np.abs(c - np.round(c)) <= tol))

    def two_torsion(self) -> list["JacobianPoint"]:
        """The ``2^(2k)`` points of order dividing two."""
        if self.k > MAX_TORSION_GENUS:
            raise GenusTooLarge(f"2-torsion enumeration refused for k={self.k} > {MAX_TORSION_GENUS}")
        return [JacobianPoint(self.point(0.5 * np.array(bits)), self)
                for bits in itertools.product((0, 1), repeat=2 * self.k)]


@dataclass(frozen=True, eq=False)
class JacobianPoint:
    """Point of ``C^k / L`` stored through a representative ``q``."""

    q: np.ndarray
    lattice: Lattice

    def __post_init__(self):
        q = np.array(self.q, dtype=complex).reshape(-1)
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def coordinates(self) -> np.ndarray:
        return self.lattice.coordinates(self.q)

    def distance(self, other) -> float:
        """Euclidean length of the shortest-coordinate difference of representatives."""
        return torus_distance(self.q, other.q if isinstance(other, JacobianPoint) else other,
                              self.lattice)


def torus_distance(q1, q2, lattice: Lattice) -> float:
    """Length of ``q1 - q2`` after rounding its lattice coordinates to the nearest integers."""
    c = lattice.coordinates(np.asarray(q1) - np.asarray(q2))
    return float(np.linalg.norm(lattice.point(c - np.round(c))))


def reduce(q, L: Lattice, tol: float = LATTICE_TOL):
    """Module-level form of :meth:`Lattice.reduce`."""
    return L.reduce(q, tol)


def is_lattice_member(q, L: Lattice, tol: float = LATTICE_TOL) -> bool:
    return L.is_member(q, tol)


def two_torsion(L: Lattice) -> list[JacobianPoint]:
    return L.two_torsion()


def random_period_matrix(rng: np.random.Generator, k: int, eps: float = 0.1) -> PeriodMatrix:
    """Random ``S + i (M^T M + eps Id)`` with ``S`` symmetric Gaussian."""
    G = rng.standard_normal((k, k))
    M = rng.standard_normal((k, k))
    return validate(0.5 * (G + G.T) + 1j * (M.T @ M + eps * np.eye(k)))


def random_unitary(rng: np.random.Generator, k: int) -> np.ndarray:
    Z = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
