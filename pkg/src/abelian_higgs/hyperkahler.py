"""Hyperkähler structure of ``T* Jac`` realized on ``H^k``.

Tangent vectors are :class:`~abelian_higgs.quaternion.QuaternionVector`
values carrying the flat metric ``g(v, w) = Re <v, w>``. A Higgs tangent
vector ``(q, p)`` in normalized coordinates is sent to ``H^k`` by::

    (q, p)  ->  C q + (i C p) J,        C = sqrt(2 Im Pi)

``C`` makes the Hermitian form standard. The extra factor ``i`` on the
Higgs block makes the quaternion units ``I, J, K`` agree with the complex
structures induced on periods of harmonic forms by ``-* conj``, ``i``
and ``i * conj`` (see :func:`derham_structure`).

Functions
---------
metric, kahler_form, omega_frame, complex_symplectic
    Flat hyperkähler data on ``H^k``.
hodge_star, derham_structure, derham_metric, hermitian_gram
    The same structure computed from periods of harmonic forms.
omega_cotangent
    Canonical symplectic form of the cotangent bundle.
jpi, cstar_act_periods
    Multiplication by ``lambda`` on Higgs fields in real period coordinates.
energy, gradient_flow, circle_act, hamiltonian_residual
    Energy and its flows.
potential_check
    Finite-difference test of Kähler potentials.
quaternionization_rank
    Rank of ``(x + y i) (x) v -> (x + y u) v``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FrameNotOrthonormal
from .moduli import DolbeaultPoint, higgs_to_periods, periods_to_higgs
from .period_matrix import as_period_matrix, cup_product, Lattice
from .quaternion import (I_STRUCT, ComplexStructure, QuaternionVector, act,
                         real_matrix)

FRAME_TOL = 1e-9
RANK_RTOL = 1e-8


# --- coordinates ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class UnitaryCoordinates:
    """Higgs coordinates ``q_u = C q``, ``p_u = C p`` with ``C = sqrt(2 Im Pi)``."""

    q_u: np.ndarray
    p_u: np.ndarray

    def __post_init__(self):
        for name in ("q_u", "p_u"):
            arr = np.array(getattr(self, name), dtype=complex).reshape(-1)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_dolbeault(cls, x: DolbeaultPoint, Pi) -> "UnitaryCoordinates":
        C = as_period_matrix(Pi).sqrt_2Y
        return cls(C @ x.q, C @ x.p)

    def to_dolbeault(self, Pi) -> DolbeaultPoint:
        C = as_period_matrix(Pi).sqrt_2Y
        return DolbeaultPoint(np.linalg.solve(C, self.q_u), np.linalg.solve(C, self.p_u))

    def quaternion(self) -> QuaternionVector:
        """The point ``q_u + (i p_u) J`` of ``H^k``."""
        return QuaternionVector(self.q_u, 1j * self.p_u)

    @classmethod
    def from_quaternion(cls, v: QuaternionVector) -> "UnitaryCoordinates":
        return cls(v.q, -1j * v.p)


def tangent(dq, dp) -> QuaternionVector:
    """Tangent vector of ``H^k`` from a unitary Higgs tangent ``(dq, dp)``."""
    return UnitaryCoordinates(dq, dp).quaternion()


def higgs_to_quaternion(q, p, Pi) -> QuaternionVector:
    """Send normalized Higgs coordinates to ``H^k``."""
    C = as_period_matrix(Pi).sqrt_2Y
    return QuaternionVector(C @ np.asarray(q, complex), 1j * (C @ np.asarray(p, complex)))


def quaternion_to_higgs(v: QuaternionVector, Pi) -> tuple[np.ndarray, np.ndarray]:
    C = as_period_matrix(Pi).sqrt_2Y
    return np.linalg.solve(C, v.q), np.linalg.solve(C, -1j * v.p)


# --- flat hyperkähler data -------------------------------------------------------

def metric(v1: QuaternionVector, v2: QuaternionVector) -> float:
    """``g(v1, v2) = Re <v1, v2>``."""
    return float(v1.to_real() @ v2.to_real())


def kahler_form(u, v1: QuaternionVector, v2: QuaternionVector) -> float:
    """``omega_u(v1, v2) = g(u v1, v2)``."""
    return metric(act(u, v1), v2)


def omega_frame(u1, u2, v1: QuaternionVector, v2: QuaternionVector) -> complex:
    """``omega_u1 + i omega_u2`` for an explicit pair ``(u1, u2)``."""
    return complex(kahler_form(u1, v1, v2), kahler_form(u2, v1, v2))


def complex_symplectic(u: ComplexStructure, u1: ComplexStructure,
                       v1: QuaternionVector, v2: QuaternionVector,
                       tol: float = FRAME_TOL) -> complex:
    """Complex symplectic form ``omega_u1 + i omega_u2`` with ``u2 = u x u1``.

    The result is complex bilinear for ``u``.

    Raises
    ------
    FrameNotOrthonormal
        If ``u`` and ``u1`` are not orthogonal within ``tol``.
    """
    if abs(u.dot(u1)) > tol:
        raise FrameNotOrthonormal(f"u . u1 = {u.dot(u1)!r}")
    u2 = ComplexStructure.from_vector(np.cross(u.vector, u1.vector), normalize=True)
    return omega_frame(u1, u2, v1, v2)


def form_matrix(u, k: int) -> np.ndarray:
    """Matrix ``W`` with ``omega_u(x, y) = x^T W y`` on real 4k-vectors."""
    return real_matrix(u, k).T


# --- the same structure on periods ---------------------------------------------

def _split_types(periods, Pi):
    """Coefficients ``(c, d)`` with ``eta = sum c_j omega_j + sum d_j conj(omega_j)``."""
    P = as_period_matrix(Pi)
    v = np.asarray(periods, dtype=complex).reshape(-1)
    k = P.k
    a, b = v[:k], v[k:]
    c = np.linalg.solve(2j * P.Y, b - P.Pi.conj() @ a)
    return c, a - c


def hodge_star(periods, Pi) -> np.ndarray:
    """Periods of ``*eta``; ``*`` is ``-i`` on (1,0)-forms and ``+i`` on (0,1)-forms."""
    P = as_period_matrix(Pi)
    c, d = _split_types(periods, P)
    c_star, d_star = -1j * c, 1j * d
    return np.concatenate([c_star + d_star, P.Pi @ c_star + P.Pi.conj() @ d_star])


def derham_structure(name: str, periods, Pi) -> np.ndarray:
    """Complex structures on harmonic forms: ``I = -* conj``, ``J = i``, ``K = i * conj``."""
    v = np.asarray(periods, dtype=complex).reshape(-1)
    if name == "I":
        return -hodge_star(v.conj(), Pi)
    if name == "J":
        return 1j * v
    if name == "K":
        return 1j * hodge_star(v.conj(), Pi)
    raise ValueError(f"unknown structure {name!r}")


def derham_metric(e1, e2, Pi) -> float:
    """``Re`` of the integral of ``eta1 ^ * conj(eta2)``, from periods."""
    e2 = np.asarray(e2, dtype=complex)
    return cup_product(e1, hodge_star(e2.conj(), Pi)).real


def hermitian_gram(Pi) -> np.ndarray:
    """Gram matrix ``<conj(omega_j), conj(omega_l)>`` computed from cup products."""
    P = as_period_matrix(Pi)
    k = P.k
    basis = [np.concatenate([np.eye(k)[j], P.Pi.conj()[:, j]]) for j in range(k)]
    return np.array([[cup_product(bj, hodge_star(bl.conj(), P)) for bl in basis]
                     for bj in basis])


def higgs_tangent_periods(q, p, Pi) -> np.ndarray:
    """Period vector of the harmonic form of a Higgs tangent ``(q, p)``."""
    a, b = higgs_to_periods(q, p, Pi)
    return np.concatenate([a, b])


def omega_cotangent(q1, p1, q2, p2, Pi) -> complex:
    """``<Psi1, conj(Phi2)> - <Psi2, conj(Phi1)>`` in normalized coordinates.

    The Hermitian form comes from :func:`hermitian_gram`, not from ``C``.
    """
    G = hermitian_gram(Pi)
    q1, p1, q2, p2 = (np.asarray(x, dtype=complex) for x in (q1, p1, q2, p2))
    return complex(q1 @ G @ p2 - q2 @ G @ p1)


# --- the C*-action on real periods ------------------------------------------------

@dataclass(frozen=True, eq=False)
class JPiMatrix:
    """Real ``2k x 2k`` matrix of multiplication by ``i`` on ``(alpha, beta)``."""

    M: np.ndarray

    def act(self, lam, alphabeta) -> np.ndarray:
        lam = complex(lam)
        if lam == 0:
            raise ValueError("lambda must be nonzero")
        x = np.asarray(alphabeta, dtype=float)
        return lam.real * x + lam.imag * (self.M @ x)


def jpi(Pi) -> JPiMatrix:
    P = as_period_matrix(Pi)
    X, Y, Yi = P.X, P.Y, P.Y_inv
    M = np.block([[-Yi @ X, Yi], [-X @ Yi @ X - Y, X @ Yi]])
    return JPiMatrix(M)


def cstar_act_periods(Pi, lam, alphabeta) -> np.ndarray:
    """``(Re(lam) Id + Im(lam) J_Pi) (alpha, beta)``."""
    return jpi(Pi).act(lam, alphabeta)


def higgs_alphabeta(p, Pi) -> np.ndarray:
    """Real periods ``alpha = Re p``, ``beta = X Re p - Y Im p`` of ``Re(Phi)``."""
    P = as_period_matrix(Pi)
    p = np.asarray(p, dtype=complex)
    return np.concatenate([p.real, P.X @ p.real - P.Y @ p.imag])


def alphabeta_higgs(alphabeta, Pi) -> np.ndarray:
    P = as_period_matrix(Pi)
    ab = np.asarray(alphabeta, dtype=float)
    alpha, beta = ab[:P.k], ab[P.k:]
    return alpha + 1j * (P.Y_inv @ (P.X @ alpha - beta))


# --- energy and flows ----------------------------------------------------------

def _unitary_p(x, Pi):
    if isinstance(x, QuaternionVector):
        return x.p
    if isinstance(x, UnitaryCoordinates):
        return x.p_u
    if isinstance(x, DolbeaultPoint):
        if Pi is None:
            raise ValueError("energy of a Dolbeault point needs the period matrix")
        return as_period_matrix(Pi).sqrt_2Y @ x.p
    raise TypeError(f"unsupported point type {type(x).__name__}")


def energy(x, Pi=None) -> float:
    """``e = |p|^2 / 2`` in the flat metric."""
    p = _unitary_p(x, Pi)
    return 0.5 * float(np.vdot(p, p).real)


def _scale_p(x, lam):
    if isinstance(x, QuaternionVector):
        return QuaternionVector(x.q, lam * x.p)
    if isinstance(x, UnitaryCoordinates):
        return UnitaryCoordinates(x.q_u, lam * x.p_u)
    if isinstance(x, DolbeaultPoint):
        return DolbeaultPoint(x.q, lam * x.p)
    raise TypeError(f"unsupported point type {type(x).__name__}")


def gradient_flow(x, t: float):
    """Downward gradient flow of the energy: ``p(t) = exp(-t) p``."""
    return _scale_p(x, np.exp(-t))


def circle_act(x, theta: float):
    """``(q, p) -> (q, exp(i theta) p)``."""
    return _scale_p(x, np.exp(1j * theta))


def energy_gradient(v: QuaternionVector) -> QuaternionVector:
    return QuaternionVector(np.zeros_like(v.q), v.p)


def circle_field(v: QuaternionVector) -> QuaternionVector:
    """``X_e = I grad(e)``, the generator of :func:`circle_act`."""
    return act(I_STRUCT, energy_gradient(v))


def hamiltonian_residual(v: QuaternionVector, w: QuaternionVector, h: float = 1e-4) -> float:
    """Distance between ``omega_I(X_e, w)`` and ``-de(w)``.

    ``de(w)`` is a central difference. With ``omega_u(a, b) = g(u a, b)`` the
    Hamiltonian relation reads ``omega_I(X_e, .) = -de``.
    """
    de = (energy(v + w * h) - energy(v - w * h)) / (2 * h)
    return abs(kahler_form(I_STRUCT, circle_field(v), w) + de)


# --- Kähler potentials ----------------------------------------------------------

def potential_rho(v: QuaternionVector) -> float:
    return 0.5 * float(np.vdot(v.q, v.q).real + np.vdot(v.p, v.p).real)


def potential_psi(v: QuaternionVector) -> float:
    return float(np.vdot(v.q, v.q).real - np.vdot(v.p, v.p).real)


def potential_phi(v: QuaternionVector) -> float:
    return 0.5 * float(np.vdot(v.p, v.p).real)


POTENTIALS = {
    "rho": (potential_rho, "kahler"),
    "psi": (potential_psi, "pluriharmonic"),
    "phi": (potential_phi, "kahler"),
}


def fd_hessian(f, x: np.ndarray, h: float) -> np.ndarray:
    """Central-difference Hessian of ``f`` on real vectors."""
    n = x.size
    H = np.empty((n, n))
    E = np.eye(n) * h
    for a in range(n):
        for b in range(a, n):
            val = (f(x + E[a] + E[b]) - f(x + E[a] - E[b])
                   - f(x - E[a] + E[b]) + f(x - E[a] - E[b])) / (4 * h * h)
            H[a, b] = H[b, a] = val
    return H


def ddc_form(u, f, sample: QuaternionVector, h: float = 1e-3) -> np.ndarray:
    """Finite-difference matrix of ``-1/2 d(df o u)`` on coordinate 2-planes."""
    k = sample.k
    U = real_matrix(u, k)
    H = fd_hessian(lambda x: f(QuaternionVector.from_real(x)), sample.to_real(), h)
    HU = H @ U
    return -0.5 * (HU - HU.T)


def potential_check(u, f, sample, h: float = 1e-3, target: str | None = None) -> float:
    """Maximum deviation of ``-1/2 d(df o u)`` from its expected value.

    Parameters
    ----------
    u : ComplexStructure
    f : {"rho", "psi", "phi"} or callable on QuaternionVector
    sample : QuaternionVector or UnitaryCoordinates
    h : float
        Finite-difference step.
    target : {"kahler", "pluriharmonic"}, optional
        Compare with ``omega_u`` or with zero. Named potentials supply a default.

    Returns
    -------
    float
    """
    if isinstance(f, str):
        f, default = POTENTIALS[f]
        target = target or default
    if target not in ("kahler", "pluriharmonic"):
        raise ValueError("target must be 'kahler' or 'pluriharmonic'")
    if isinstance(sample, UnitaryCoordinates):
        sample = sample.quaternion()
    form = ddc_form(u, f, sample, h)
    expected = form_matrix(u, sample.k) if target == "kahler" else 0.0
    return float(np.max(np.abs(form - expected)))


# --- quaternionization ------------------------------------------------------------

def quaternionization_matrix(u, Pi) -> np.ndarray:
    """Real matrix of ``(x + y i) (x) v -> (x + y u) v`` on the lattice basis of ``V``."""
    P = as_period_matrix(Pi)
    G = P.sqrt_2Y @ Lattice.higgs_lattice(P).generators
    cols = []
    for j in range(G.shape[1]):
        gamma = QuaternionVector(G[:, j], np.zeros(P.k))
        cols.append(gamma.to_real())
        cols.append(act(u, gamma).to_real())
    return np.array(cols).T


def quaternionization_rank(u, Pi, rtol: float = RANK_RTOL) -> int:
    s = np.linalg.svd(quaternionization_matrix(u, Pi), compute_uv=False)
    return int(np.sum(s > rtol * s[0]))
