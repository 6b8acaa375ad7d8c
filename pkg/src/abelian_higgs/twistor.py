"""Twistor space of ``H^k / L`` as an atlas over two affine charts of ``P^1``.

A point is a fiber coordinate ``v = [q; p]`` in ``C^(2k)`` together with a
base coordinate, ``zeta`` in chart 1 or ``xi`` in chart 2 (``xi zeta = 1``
on the overlap). The fiber coordinate is sent to ``H^k`` by::

    chart 1:  v -> (1 + |zeta|^2)^-1 (1 + zeta K)(q + pJ)
    chart 2:  v -> (1 + |xi|^2)^-1   (conj(xi) + K)(q + pJ)

Twistor lines are the sections with constant ``H^k`` value. The real
structure is the lift ``(m, x) -> (m, antipode(x))`` of the product
trivialization, which preserves every twistor line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChartError, NotLatticeVector
from .hyperkahler import kahler_form, omega_frame
from .period_matrix import LATTICE_TOL, Lattice
from .quaternion import (I_STRUCT, J_STRUCT, K_STRUCT, QuaternionVector, act,
                         chart_conjugator, conjugated_frame, stereo_chart1,
                         stereo_chart2)


def _fiber(v) -> np.ndarray:
    if isinstance(v, QuaternionVector):
        v = v.to_complex()
    arr = np.array(v, dtype=complex).reshape(-1)
    if arr.size % 2:
        raise ValueError("fiber coordinate must have even length 2k")
    arr.setflags(write=False)
    return arr


def _check_chart(chart):
    if chart not in (1, 2):
        raise ChartError(f"chart must be 1 or 2, got {chart!r}")


@dataclass(frozen=True, eq=False)
class TwistorPoint:
    """Fiber coordinate ``v`` over base coordinate ``base`` of chart ``chart``."""

    chart: int
    v: np.ndarray
    base: complex

    def __post_init__(self):
        _check_chart(self.chart)
        object.__setattr__(self, "v", _fiber(self.v))
        object.__setattr__(self, "base", complex(self.base))

    @property
    def k(self) -> int:
        return self.v.size // 2

    @property
    def q(self) -> np.ndarray:
        return self.v[: self.k]

    @property
    def p(self) -> np.ndarray:
        return self.v[self.k:]


@dataclass(frozen=True, eq=False)
class TwistorLine:
    """Twistor line through ``v0 = [q0; p0]`` in the fiber over ``zeta = 0``."""

    v0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v0", _fiber(self.v0))

    @property
    def k(self) -> int:
        return self.v0.size // 2

    @property
    def q0(self) -> np.ndarray:
        return self.v0[: self.k]

    @property
    def p0(self) -> np.ndarray:
        return self.v0[self.k:]


def point_distance(a: TwistorPoint, b: TwistorPoint) -> float:
    """Distance of two points given in the same chart; ``inf`` otherwise."""
    if a.chart != b.chart:
        return float("inf")
    return float(max(np.max(np.abs(a.v - b.v)), abs(a.base - b.base)))


# --- charts ----------------------------------------------------------------------

def fiber_structure(chart: int, base):
    """Complex structure ``I_zeta`` or ``I_xi`` of the fiber."""
    _check_chart(chart)
    return stereo_chart1(base) if chart == 1 else stereo_chart2(base)


def chart_map(pt: TwistorPoint) -> QuaternionVector:
    """Value in ``H^k`` of a twistor point in the product trivialization."""
    h = chart_conjugator(pt.chart, pt.base)
    m = act(h, QuaternionVector.from_complex(pt.v))
    return m * (1.0 / (1.0 + abs(pt.base) ** 2))


def chart_inverse(m: QuaternionVector, chart: int, base) -> TwistorPoint:
    """Fiber coordinate over ``base`` whose :func:`chart_map` is ``m``.

    Uses ``(1 + zeta K)^-1 = (1 - zeta K) / (1 + |zeta|^2)`` and the analogue
    ``(conj(xi) + K)^-1 = (xi - K) / (1 + |xi|^2)``.
    """
    _check_chart(chart)
    c = complex(base)
    h_inv = chart_conjugator(chart, c).conj()
    return TwistorPoint(chart, act(h_inv, m).to_complex(), c)


def to_chart(pt: TwistorPoint, chart: int) -> TwistorPoint:
    """Same point in the other chart: ``v2 = xi v1`` with ``xi zeta = 1``.

    Raises
    ------
    ChartError
        At a pole, which lies in one chart only.
    """
    _check_chart(chart)
    if chart == pt.chart:
        return pt
    if pt.base == 0:
        raise ChartError("the pole is not covered by the other chart")
    other = 1.0 / pt.base
    return TwistorPoint(chart, other * pt.v, other)


# --- twistor lines -------------------------------------------------------------

def line_eval(line: TwistorLine, chart: int, base) -> TwistorPoint:
    """Value of a twistor line over a base point.

    Chart 1: ``[q0 + i zeta conj(p0); p0 - i zeta conj(q0)]``;
    chart 2: ``[xi q0 + i conj(p0); xi p0 - i conj(q0)]``.
    """
    _check_chart(chart)
    c = complex(base)
    q0, p0 = line.q0, line.p0
    if chart == 1:
        v = np.concatenate([q0 + 1j * c * p0.conj(), p0 - 1j * c * q0.conj()])
    else:
        v = np.concatenate([c * q0 + 1j * p0.conj(), c * p0 - 1j * q0.conj()])
    return TwistorPoint(chart, v, c)


def line_through(pt: TwistorPoint) -> TwistorLine:
    """The twistor line containing ``pt``, solved from :func:`line_eval`.

    In chart 1, with ``v = [q; p]`` over ``zeta``::

        q0 = (q - i zeta conj(p)) / (1 + |zeta|^2)
        p0 = (p + i zeta conj(q)) / (1 + |zeta|^2)

    and in chart 2 over ``xi``::

        q0 = (conj(xi) q - i conj(p)) / (1 + |xi|^2)
        p0 = (conj(xi) p + i conj(q)) / (1 + |xi|^2)
    """
    c = pt.base
    d = 1.0 + abs(c) ** 2
    q, p = pt.q, pt.p
    if pt.chart == 1:
        q0 = (q - 1j * c * p.conj()) / d
        p0 = (p + 1j * c * q.conj()) / d
    else:
        q0 = (c.conjugate() * q - 1j * p.conj()) / d
        p0 = (c.conjugate() * p + 1j * q.conj()) / d
    return TwistorLine(np.concatenate([q0, p0]))


def line_cauchy_riemann(line: TwistorLine, zeta, h: float = 1e-4) -> float:
    """Finite-difference test that a line is holomorphic in chart 1.

    With ``f`` the chart map at ``zeta``, compares ``f(dv/dy)`` with
    ``I_zeta f(dv/dx)`` where ``zeta = x + i y``. Central differences.
    """
    z = complex(zeta)

    def value(w):
        return line_eval(line, 1, w).v

    dx = (value(z + h) - value(z - h)) / (2 * h)
    dy = (value(z + 1j * h) - value(z - 1j * h)) / (2 * h)
    fx = chart_map(TwistorPoint(1, dx, z))
    fy = chart_map(TwistorPoint(1, dy, z))
    return float(np.max(np.abs((fy - act(stereo_chart1(z), fx)).to_complex())))


# --- real structure ----------------------------------------------------------------

def antipodal_base(chart: int, base) -> tuple[int, complex]:
    """Antipode of a base point: chart-1 ``zeta`` goes to chart-2 ``-conj(zeta)`` and back."""
    _check_chart(chart)
    return (2 if chart == 1 else 1), -complex(base).conjugate()


def real_structure(pt: TwistorPoint) -> TwistorPoint:
    """Antiholomorphic involution covering the antipodal map.

    Keeps the ``H^k`` value and moves the base to its antipode. In
    coordinates, chart 1 ``([q; p], zeta)`` goes to chart 2
    ``([i conj(p); -i conj(q)], -conj(zeta))``.
    """
    chart, base = antipodal_base(pt.chart, pt.base)
    return chart_inverse(chart_map(pt), chart, base)


def real_structure_closed_form(pt: TwistorPoint) -> TwistorPoint:
    """Coordinate formula for :func:`real_structure`."""
    chart, base = antipodal_base(pt.chart, pt.base)
    sign = 1.0 if pt.chart == 1 else -1.0
    v = sign * np.concatenate([1j * pt.p.conj(), -1j * pt.q.conj()])
    return TwistorPoint(chart, v, base)


# --- lattice and C* actions ---------------------------------------------------------

def lattice_act(gamma, pt: TwistorPoint, lattice: Lattice, tol: float = LATTICE_TOL) -> TwistorPoint:
    """Translate by ``gamma`` in ``L``, following the twistor line of ``(gamma, 0)``.

    Chart 1: ``[q + gamma; p - i zeta conj(gamma)]``;
    chart 2: ``[q + xi gamma; p - i conj(gamma)]``.

    Raises
    ------
    NotLatticeVector
    """
    gamma = np.asarray(gamma, dtype=complex).reshape(-1)
    if gamma.size != pt.k:
        raise ValueError(f"gamma must have length {pt.k}")
    if not lattice.is_member(gamma, tol):
        raise NotLatticeVector("translation vector is not in the lattice")
    c = pt.base
    if pt.chart == 1:
        shift = np.concatenate([gamma, -1j * c * gamma.conj()])
    else:
        shift = np.concatenate([c * gamma, -1j * gamma.conj()])
    return TwistorPoint(pt.chart, pt.v + shift, c)


def cstar_act(lam, pt: TwistorPoint) -> TwistorPoint:
    """Holomorphic ``C*``-action extending ``(q, p) -> (q, lam p)`` on the fiber over 0.

    The line through ``pt`` is carried to the line through ``(q0, lam p0)``
    and evaluated over the moved base: ``lam zeta`` in chart 1,
    ``xi / lam`` in chart 2.
    """
    lam = complex(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    line = line_through(pt)
    moved = TwistorLine(np.concatenate([line.q0, lam * line.p0]))
    base = lam * pt.base if pt.chart == 1 else pt.base / lam
    return line_eval(moved, pt.chart, base)


# --- the O(2)-valued symplectic form ---------------------------------------------------

def fiber_form(chart: int, base, a: QuaternionVector, b: QuaternionVector) -> complex:
    """Fiberwise complex symplectic form on tangent vectors of ``H^k``.

    Chart 1: ``Omega_(J,K) - 2 zeta omega_I + zeta^2 Omega_(-J,K)``;
    chart 2: ``Omega_(-J,K) - 2 xi omega_I + xi^2 Omega_(J,K)``.
    """
    _check_chart(chart)
    c = complex(base)
    jk = omega_frame(J_STRUCT, K_STRUCT, a, b)
    mjk = omega_frame(-J_STRUCT, K_STRUCT, a, b)
    wi = kahler_form(I_STRUCT, a, b)
    if chart == 1:
        return jk - 2 * c * wi + c * c * mjk
    return mjk - 2 * c * wi + c * c * jk


def fiber_form_frame(chart: int, base, a: QuaternionVector, b: QuaternionVector) -> complex:
    """``(1 + |x|^2) Omega_(J_x, K_x)`` with the conjugated frame at ``x``."""
    _check_chart(chart)
    _, Jx, Kx = conjugated_frame(chart, base)
    return (1.0 + abs(complex(base)) ** 2) * omega_frame(Jx, Kx, a, b)


def fiber_form_pullback(chart: int, base, a: QuaternionVector, b: QuaternionVector) -> complex:
    """``Omega_(J,K)`` evaluated on ``(1 - zeta K) a, (1 - zeta K) b`` or ``(xi - K) a, (xi - K) b``."""
    h = chart_conjugator(chart, base).conj()
    return omega_frame(J_STRUCT, K_STRUCT, act(h, a), act(h, b))


def fiber_form_coordinates(pt: TwistorPoint, a, b) -> complex:
    """:func:`fiber_form` on fiber-coordinate tangent vectors at ``pt``."""
    fa = chart_map(TwistorPoint(pt.chart, a, pt.base))
    fb = chart_map(TwistorPoint(pt.chart, b, pt.base))
    return fiber_form(pt.chart, pt.base, fa, fb)


SECTIONS = {
    # name: (degree, chart-1 function, chart-2 function)
    "delta": (2, lambda z: np.ones_like(z), lambda x: x**2),
    "sigma": (1, lambda z: np.ones_like(z), lambda x: x),
    "dzeta": (-2, lambda z: np.ones_like(z), lambda x: x**-2),
}


def section_glue(d: int, s1, s2, samples) -> float:
    """Largest ``|s1(zeta) - xi^-d s2(xi)|`` over sample ``zeta`` with ``xi = 1/zeta``."""
    zeta = np.asarray(samples, dtype=complex)
    if np.any(zeta == 0):
        raise ChartError("gluing is checked on the overlap only")
    xi = 1.0 / zeta
    return float(np.max(np.abs(s1(zeta) - xi ** (-d) * s2(xi))))


# --- coordinate formulas as printed, for the conformance report ----------------------

def printed_pole_real_structure(pt: TwistorPoint) -> TwistorPoint:
    """Printed pole formula: chart 1 ``([q; p], 0)`` to chart 2 ``([-i conj(p); i conj(q)], 0)``."""
    if pt.chart != 1 or pt.base != 0:
        raise ChartError("the printed pole formula applies at zeta = 0")
    return TwistorPoint(2, np.concatenate([-1j * pt.p.conj(), 1j * pt.q.conj()]), 0)


def printed_general_real_structure(pt: TwistorPoint, chart: int = 2) -> TwistorPoint:
    """Printed general formula ``[-i conj(xi) conj(p); i conj(xi) conj(q)]`` over ``-conj(xi)``.

    ``chart = 2`` reads the image as printed; ``chart = 1`` reads it as a
    chart-1 point, which is the reading consistent with the antipodal map.
    """
    if pt.chart != 1 or pt.base == 0:
        raise ChartError("the printed general formula applies at zeta != 0 in chart 1")
    xi_bar = (1.0 / pt.base).conjugate()
    v = np.concatenate([-1j * xi_bar * pt.p.conj(), 1j * xi_bar * pt.q.conj()])
    return TwistorPoint(chart, v, -xi_bar)


def printed_line_through(pt: TwistorPoint) -> TwistorLine:
    """Printed chart-1 line-through display ``[p + i zeta conj(q); q - i zeta conj(p)] / (1 + |zeta|^2)``."""
    if pt.chart != 1:
        raise ChartError("the printed display is for chart 1")
    c = pt.base
    d = 1.0 + abs(c) ** 2
    return TwistorLine(np.concatenate([(pt.p + 1j * c * pt.q.conj()) / d,
                                       (pt.q - 1j * c * pt.p.conj()) / d]))


def swap_blocks(line: TwistorLine) -> TwistorLine:
    return TwistorLine(np.concatenate([line.p0, line.q0]))
