"""Randomized invariant suites and the verification report.

Each suite draws samples from a generator seeded by ``(seed, suite)``, so a
suite's results do not depend on which other suites run. Checks record the
largest residual seen and the tolerance it is held to. Report entries are
ordered by check name.

Default sample counts (used when ``samples`` is ``None``):

================  ==========================================================
suite             samples
================  ==========================================================
quaternion        10000 random complex structures and quaternion pairs
period            100 period matrices for each k in 1..4
lattice           1000 points for each k in 1..4
conversion        1000 points for each k in 1..4
jpi               100 period matrices per k, 1000 action samples
hyperkahler       1000 tangent-vector pairs
potential         4 points; I, J, K and 20 random u for rho, 8 angles for psi, 4 for phi
quaternionization 50 random u
twistor           1000 points; 20 lines at 8 base points for the real structure
conformance       200 points
================  ==========================================================
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import hyperkahler as hk
from . import moduli as md
from . import twistor as tw
from .errors import ImNotPositiveDefinite, NotSymmetric
from .period_matrix import (Lattice, as_period_matrix, cup_product,
                            random_period_matrix, random_unitary,
                            symplectic_matrix, torus_distance, unitary_periods,
                            validate)
from .quaternion import (I_STRUCT, J_STRUCT, K_STRUCT, QI, QJ, QK,
                         ComplexStructure, Quaternion, QuaternionVector, act,
                         act_array, conj_array, explicit_stereo1,
                         explicit_stereo2, hamilton, stereo_array,
                         stereo_chart1, stereo_chart2)

SUITES = ("quaternion", "period", "lattice", "conversion", "jpi", "hyperkahler",
          "potential", "quaternionization", "twistor", "conformance")
GENERA = (1, 2, 3, 4)


@dataclass
class Check:
    name: str
    samples: int
    max_residual: float
    tolerance: float
    comparison: str = "<="

    @property
    def passed(self) -> bool:
        if self.comparison == ">":
            return bool(self.max_residual > self.tolerance)
        return bool(self.max_residual <= self.tolerance)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


@dataclass
class SuiteResult:
    checks: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    conformance: list = field(default_factory=list)


class Context:
    """Random source, sample-size policy and recorder for one suite."""

    def __init__(self, suite: str, seed: int, samples=None, pi=None, tol=None):
        self.suite = suite
        self.rng = np.random.default_rng([int(seed), SUITES.index(suite)])
        self.samples = samples
        self.pi = as_period_matrix(pi) if pi is not None else None
        self.tol = tol
        self.result = SuiteResult()

    def n(self, default: int) -> int:
        return max(1, int(self.samples)) if self.samples is not None else default

    def record(self, name: str, residuals, tolerance: float, comparison: str = "<="):
        res = np.atleast_1d(np.asarray(residuals, dtype=float))
        worst = float(np.max(res)) if comparison == "<=" else float(np.min(res))
        if np.any(np.isnan(res)):
            worst = float("nan")
        if self.tol is not None and comparison == "<=":
            tolerance = self.tol
        full = f"{self.suite}.{name}"
        prev = self.result.checks.get(full)
        if prev is not None:
            pick = max if comparison == "<=" else min
            worst = pick(prev.max_residual, worst)
            self.result.checks[full] = Check(full, prev.samples + res.size, worst, tolerance, comparison)
        else:
            self.result.checks[full] = Check(full, int(res.size), worst, tolerance, comparison)

    def constant(self, name, value):
        if isinstance(value, complex):
            value = {"re": value.real, "im": value.imag}
        self.result.constants[name] = value

    def note(self, item: str, finding: str, measured: float):
        self.result.conformance.append({"item": item, "finding": finding, "measured": float(measured)})

    def period_matrices(self, count: int, genera=GENERA):
        """``count`` random period matrices per genus, plus the user's one if given."""
        out = [random_period_matrix(self.rng, k) for k in genera for _ in range(count)]
        if self.pi is not None:
            out.append(self.pi)
        return out

    def fixed_matrices(self, genera=GENERA):
        """One period matrix per genus, or only the user's matrix if given."""
        if self.pi is not None:
            return [self.pi]
        return [random_period_matrix(self.rng, k) for k in genera]


# --- random samples -------------------------------------------------------------------

def _cvec(rng, n, scale=1.0):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _unit(rng) -> ComplexStructure:
    return ComplexStructure.from_vector(rng.standard_normal(3), normalize=True)


def _qvec(rng, k) -> QuaternionVector:
    return QuaternionVector(_cvec(rng, k), _cvec(rng, k))


def _zeta(rng) -> complex:
    r = 10.0 ** rng.uniform(-1, 1)
    return complex(r * np.exp(1j * rng.uniform(0, 2 * np.pi)))


def _derham(rng, k) -> md.DeRhamPoint:
    re = rng.standard_normal(2 * k)
    im = rng.uniform(0, 4 * np.pi, 2 * k)
    return md.DeRhamPoint.from_periods(re + 1j * im)


def _qdiff(a: QuaternionVector, b: QuaternionVector) -> float:
    return float(np.max(np.abs(a.to_complex() - b.to_complex())))


# --- suites ------------------------------------------------------------------------------

def suite_quaternion(ctx: Context):
    rng = ctx.rng
    basis = [(QI * QI + 1).norm(), (QJ * QJ + 1).norm(), (QK * QK + 1).norm(),
             (QI * QJ - QK).norm(), (QJ * QK - QI).norm(), (QK * QI - QJ).norm(),
             (QI * QJ + QJ * QI).norm()]
    ctx.record("basis_relations", basis, 1e-12)
    ctx.record("stereo_examples", [
        np.max(np.abs(stereo_chart1(0).vector - I_STRUCT.vector)),
        np.max(np.abs(stereo_chart1(1).vector - J_STRUCT.vector)),
        np.max(np.abs(stereo_chart1(1j).vector - K_STRUCT.vector)),
        np.max(np.abs(stereo_chart2(1).vector - J_STRUCT.vector))], 1e-12)
    n = ctx.n(10000)
    # batched over all samples
    u = rng.standard_normal((n, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    uq = np.hstack([np.zeros((n, 1)), u])
    q, p = _cvec(rng, (n, 3)), _cvec(rng, (n, 3))
    vn = np.sqrt(np.sum(np.abs(q) ** 2 + np.abs(p) ** 2, axis=1))
    q2, p2 = act_array(uq, *act_array(uq, q, p))
    ctx.record("u_squared_is_minus_one",
               np.sqrt(np.sum(np.abs(q2 + q) ** 2 + np.abs(p2 + p) ** 2, axis=1)) / vn, 1e-12)
    a, b = rng.standard_normal((n, 4)), rng.standard_normal((n, 4))
    ab = hamilton(a, b)
    scale = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
    ctx.record("norm_multiplicative", np.abs(np.linalg.norm(ab, axis=1) - scale) / scale, 1e-12)
    ctx.record("conjugation_reverses_products",
               np.linalg.norm(conj_array(ab) - hamilton(conj_array(b), conj_array(a)), axis=1) / scale, 1e-12)
    qa, pa = act_array(a, *act_array(b, q, p))
    qb, pb = act_array(ab, q, p)
    ctx.record("module_action_associative",
               np.sqrt(np.sum(np.abs(qa - qb) ** 2 + np.abs(pa - pb) ** 2, axis=1)) / (scale * vn), 1e-12)
    r = 10.0 ** rng.uniform(-1, 1, n)
    z = r * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    s1, s2 = stereo_array(1, z), stereo_array(2, z)
    d = 1 + np.abs(z) ** 2
    closed1 = np.stack([(1 - np.abs(z) ** 2) / d, 2 * z.real / d, 2 * z.imag / d], axis=1)
    closed2 = closed1 * np.array([-1.0, 1.0, -1.0])
    ctx.record("chart_compatibility", np.max(np.abs(s1 - stereo_array(2, 1 / z)), axis=1), 1e-12)
    ctx.record("closed_form_stereo", np.maximum(np.max(np.abs(s1 - closed1), axis=1),
                                                np.max(np.abs(s2 - closed2), axis=1)), 1e-12)
    ctx.record("antipodal_law", np.maximum(
        np.max(np.abs(stereo_array(1, -1 / z.conj()) + s1), axis=1),
        np.max(np.abs(stereo_array(2, -z.conj()) + s1), axis=1)), 1e-12)

    # the object API on a subset, against the batched kernels
    m = min(n, 500)
    u_sq, kernels, compat, explicit, antipodal = [], [], [], [], []
    for i in range(m):
        us = ComplexStructure.from_vector(u[i])
        v = QuaternionVector(q[i], p[i])
        u_sq.append((act(us, act(us, v)) + v).norm() / v.norm())
        qa_, qb_ = Quaternion(*a[i]), Quaternion(*b[i])
        kernels.append((qa_ * qb_ - Quaternion(*ab[i])).norm() / scale[i])
        c1 = stereo_chart1(z[i])
        compat.append(np.max(np.abs(c1.vector - stereo_chart2(1 / z[i]).vector)))
        explicit.append(max(np.max(np.abs(c1.vector - explicit_stereo1(z[i]).vector)),
                            np.max(np.abs(stereo_chart2(z[i]).vector - explicit_stereo2(z[i]).vector)),
                            np.max(np.abs(c1.vector - s1[i]))))
        antipodal.append(np.max(np.abs(stereo_chart2(-z[i].conjugate()).vector + c1.vector)))
    ctx.record("u_squared_is_minus_one", u_sq, 1e-12)
    ctx.record("hamilton_kernel_matches_scalar_product", kernels, 1e-12)
    ctx.record("chart_compatibility", compat, 1e-12)
    ctx.record("closed_form_stereo", explicit, 1e-12)
    ctx.record("antipodal_law", antipodal, 1e-12)


def suite_period(ctx: Context):
    rng = ctx.rng
    gp1, gp2, change, sqrt_res, cup = [], [], [], [], []
    for P in ctx.period_matrices(ctx.n(100)):
        k = P.k
        U = random_unitary(rng, k)
        base = unitary_periods(P)
        rot = unitary_periods(P, U)
        gp1 += [base.symmetric_residual(), rot.symmetric_residual()]
        gp2 += [base.hermitian_residual(), rot.hermitian_residual()]
        change.append(max(np.max(np.abs(rot.A - U @ base.A)), np.max(np.abs(rot.B - U @ base.B))))
        C = P.sqrt_2Y
        sqrt_res.append(np.max(np.abs(C @ C - 2 * P.Y)) / np.max(np.abs(2 * P.Y)))
        u, v = _cvec(rng, 2 * k), _cvec(rng, 2 * k)
        cup.append(abs(cup_product(u, v) - u @ symplectic_matrix(k) @ v) / (np.linalg.norm(u) * np.linalg.norm(v)))
    ctx.record("symmetric_relation", gp1, 1e-10)
    ctx.record("hermitian_relation", gp2, 1e-10)
    ctx.record("basis_change_law", change, 1e-10)
    ctx.record("sqrt_2Y_squares_back", sqrt_res, 1e-12)
    ctx.record("cup_product_matrix_form", cup, 1e-12)
    missed = 0
    for _ in range(ctx.n(100)):
        k = int(rng.integers(2, 5))
        M = _cvec(rng, k * k).reshape(k, k)
        try:
            validate(M)
            missed += 1
        except NotSymmetric:
            pass
        G = rng.standard_normal((k, k))
        try:
            validate(0.5 * (G + G.T) - 1j * np.eye(k))
            missed += 1
        except ImNotPositiveDefinite:
            pass
    ctx.record("invalid_inputs_rejected", missed, 0)


def _brute_member(q, P, tol=1e-7) -> bool:
    """Membership in ``pi Y^-1 (Z^k + Pi Z^k)`` by least squares on the stacked real basis."""
    G = np.pi * np.linalg.inv(P.Y) @ np.hstack([np.eye(P.k), P.Pi])
    R = np.vstack([G.real, G.imag])
    c = np.linalg.lstsq(R, np.concatenate([q.real, q.imag]), rcond=None)[0]
    return bool(np.all(np.abs(c - np.round(c)) <= tol))


def _period_member(q, P, tol=1e-7) -> bool:
    """Membership by integrality of periods in ``2 pi i Z``."""
    a, b = md.higgs_to_periods(q, np.zeros(P.k), P)
    c = np.concatenate([a, b]) / (2j * np.pi)
    return bool(np.all(np.abs(c - np.round(c.real)) <= tol))


def suite_lattice(ctx: Context):
    rng = ctx.rng
    n = ctx.n(1000)
    idem, trans, recon, rng_ok = [], [], [], []
    torsion = []
    disagree = 0
    for P in ctx.fixed_matrices():
        L = md.q_lattice(P)
        k = P.k
        for _ in range(n):
            q = _cvec(rng, k, 3.0)
            rep, removed = L.reduce(q)
            rep2, removed2 = L.reduce(rep.q)
            idem.append(np.max(np.abs(rep2.q - rep.q)) + np.max(np.abs(removed2)))
            gamma = L.point(rng.integers(-5, 6, 2 * k))
            rep3, _ = L.reduce(q + gamma)
            trans.append(np.max(np.abs(rep3.q - rep.q)))
            recon.append(np.max(np.abs(q - rep.q - L.point(removed))))
            c = rep.coordinates
            rng_ok.append(0.0 if np.all((c >= -1e-12) & (c < 1.0)) else 1.0)
            # membership: lattice points, near misses and generic points
            member = L.point(rng.integers(-5, 6, 2 * k))
            for cand in (member, member + _cvec(rng, k, 1e-3), q, L.point(0.5 * rng.integers(0, 2, 2 * k))):
                votes = {L.is_member(cand), _brute_member(cand, P), _period_member(cand, P)}
                disagree += len(votes) - 1
        pts = L.two_torsion()
        coords = np.round(np.array([p.coordinates for p in pts]) * 2).astype(int)
        distinct = len({tuple(c) for c in coords})
        doubled = sum(not L.is_member(2 * p.q) for p in pts)
        torsion.append(abs(len(pts) - 2 ** (2 * k)) + abs(distinct - 2 ** (2 * k)) + doubled)
    ctx.record("reduce_idempotent", idem, 1e-12)
    ctx.record("reduce_translation_invariant", trans, 1e-10)
    ctx.record("reduce_reconstructs_input", recon, 1e-10)
    ctx.record("canonical_coordinates_in_unit_cube", rng_ok, 0)
    ctx.record("two_torsion_count", torsion, 0)
    ctx.record("membership_agrees_with_brute_force", disagree, 0)


def suite_conversion(ctx: Context):
    rng = ctx.rng
    n = ctx.n(1000)
    names = ("holonomy_of_log_exact", "log_of_holonomy_mod_lattice", "derham_dolbeault_roundtrip",
             "dolbeault_derham_roundtrip", "holonomy_homomorphism", "dolbeault_homomorphism",
             "iota_involutions", "iota_composite_is_inversion", "iota_matches_across_systems",
             "iota_R_fixed_points_are_2_torsion", "relator_is_one", "betti_form_translation_invariant",
             "flow_one_parameter_group")
    res = {k: [] for k in names}
    for P in ctx.fixed_matrices():
        k = P.k
        L = md.q_lattice(P)
        for _ in range(n):
            d1, d2 = _derham(rng, k), _derham(rng, k)
            b1 = md.holonomy(d1)
            res["holonomy_of_log_exact"].append(
                np.max(np.abs(md.holonomy(md.log_holonomy(b1)).values - b1.values) / np.abs(b1.values)))
            res["log_of_holonomy_mod_lattice"].append(md.derham_distance(md.log_holonomy(b1), d1))
            x1 = md.derham_to_dolbeault(d1, P)
            res["derham_dolbeault_roundtrip"].append(md.derham_distance(md.dolbeault_to_derham(x1, P), d1))
            x = md.DolbeaultPoint(_cvec(rng, k, 2.0), _cvec(rng, k))
            back = md.derham_to_dolbeault(md.dolbeault_to_derham(x, P), P)
            res["dolbeault_derham_roundtrip"].append(md.dolbeault_distance(back, x, P))
            h12 = md.holonomy(md.group_law(d1, d2))
            prod = md.group_law(b1, md.holonomy(d2))
            res["holonomy_homomorphism"].append(np.max(np.abs(h12.values - prod.values) / np.abs(prod.values)))
            x2 = md.derham_to_dolbeault(d2, P)
            res["dolbeault_homomorphism"].append(md.dolbeault_distance(
                md.derham_to_dolbeault(md.group_law(d1, d2), P), md.group_law(x1, x2, P), P))
            inv = 0.0
            for which in ("U", "R"):
                inv = max(inv, md.derham_distance(md.real_structure(md.real_structure(d1, which), which), d1),
                          md.betti_distance(md.real_structure(md.real_structure(b1, which), which), b1)
                          / np.linalg.norm(b1.values),
                          md.dolbeault_distance(md.real_structure(md.real_structure(x, which, P), which, P), x, P))
                res["iota_matches_across_systems"].append(max(
                    md.dolbeault_distance(md.derham_to_dolbeault(md.real_structure(d1, which), P),
                                          md.real_structure(x1, which, P), P),
                    md.derham_distance(md.log_holonomy(md.real_structure(b1, which)),
                                       md.real_structure(d1, which))))
            res["iota_involutions"].append(inv)
            comp = md.real_structure(md.real_structure(b1, "R"), "U")
            res["iota_composite_is_inversion"].append(np.max(np.abs(comp.values * b1.values - 1)))
            half = L.point(0.5 * rng.integers(0, 2, 2 * k) + rng.integers(-2, 3, 2 * k))
            fixed = md.DolbeaultPoint(half, _cvec(rng, k))
            res["iota_R_fixed_points_are_2_torsion"].append(
                md.dolbeault_distance(md.real_structure(fixed, "R", P), fixed, P)
                + (0.0 if L.is_member(2 * fixed.q) else 1.0))
            res["relator_is_one"].append(abs(md.evaluate_word(b1, md.Word.relator(k)) - 1))
            u, v, s = _cvec(rng, 2 * k), _cvec(rng, 2 * k), md.holonomy(d2)
            base = md.betti_symplectic(b1, u, v)
            moved = md.betti_symplectic(md.group_law(b1, s), s.values * u, s.values * v)
            res["betti_form_translation_invariant"].append(abs(moved - base) / max(1.0, abs(base)))
            m = int(rng.integers(0, 4))
            t1, t2 = rng.uniform(-3, 3, 2)
            lhs = md.hamiltonian_flow(md.hamiltonian_flow(b1, m, t1), m, t2)
            res["flow_one_parameter_group"].append(
                np.max(np.abs(lhs.values - md.hamiltonian_flow(b1, m, t1 + t2).values) / np.abs(b1.values)))
    tols = {"holonomy_of_log_exact": 1e-13, "iota_R_fixed_points_are_2_torsion": 1e-10,
            "relator_is_one": 1e-12, "iota_composite_is_inversion": 1e-12}
    for name in names:
        ctx.record(name, res[name], tols.get(name, 1e-10))


def suite_jpi(ctx: Context):
    rng = ctx.rng
    sq = []
    for P in ctx.period_matrices(ctx.n(100)):
        M = hk.jpi(P).M
        sq.append(np.max(np.abs(M @ M + np.eye(2 * P.k))))
    ctx.record("square_is_minus_identity", sq, 1e-10)
    transport, group = [], []
    mats = ctx.fixed_matrices()
    for i in range(ctx.n(1000)):
        P = mats[i % len(mats)]
        p = _cvec(rng, P.k)
        lam1, lam2 = _cvec(rng, 1)[0], _cvec(rng, 1)[0]
        ab = hk.higgs_alphabeta(p, P)
        lhs = hk.cstar_act_periods(P, lam1, ab)
        rhs = hk.higgs_alphabeta(lam1 * p, P)
        transport.append(np.max(np.abs(lhs - rhs)) / max(1.0, np.max(np.abs(rhs))))
        two = hk.cstar_act_periods(P, lam1, hk.cstar_act_periods(P, lam2, ab))
        one = hk.cstar_act_periods(P, lam1 * lam2, ab)
        group.append(np.max(np.abs(two - one)) / max(1.0, np.max(np.abs(one))))
    ctx.record("transport_matches_higgs_scaling", transport, 1e-10)
    ctx.record("cstar_group_law", group, 1e-10)


def suite_hyperkahler(ctx: Context):
    rng = ctx.rng
    mats = ctx.fixed_matrices()
    names = ("metric_invariant", "kahler_form_invariant", "kahler_form_antisymmetric",
             "omega_JK_complex_bilinear", "complex_symplectic_bilinear_random_frame",
             "frame_rotation_equivariance", "derham_structures_match_quaternions",
             "cup_product_is_minus_omega_I_plus_i_omega_K", "derham_metric_is_twice_flat",
             "unitary_coordinates_standard_hermitian", "circle_action_hamiltonian",
             "energy_along_flows")
    res = {k: [] for k in names}
    gram = []
    for P in mats:
        G = hk.hermitian_gram(P)
        gram.append(np.max(np.abs(G - 2 * P.Y)) + (0.0 if np.min(np.linalg.eigvalsh(0.5 * (G + G.conj().T))) > 0 else 1.0))
    ctx.record("hodge_gram_is_2ImPi", gram, 1e-10)
    tstar, omjk = {id(P): [] for P in mats}, {id(P): [] for P in mats}
    for i in range(ctx.n(1000)):
        P = mats[i % len(mats)]
        k = P.k
        q1, p1, q2, p2 = (_cvec(rng, k) for _ in range(4))
        v1, v2 = hk.higgs_to_quaternion(q1, p1, P), hk.higgs_to_quaternion(q2, p2, P)
        scale = v1.norm() * v2.norm()
        u = _unit(rng)
        res["metric_invariant"].append(abs(hk.metric(act(u, v1), act(u, v2)) - hk.metric(v1, v2)) / scale)
        res["kahler_form_invariant"].append(
            abs(hk.kahler_form(u, act(u, v1), act(u, v2)) - hk.kahler_form(u, v1, v2)) / scale)
        res["kahler_form_antisymmetric"].append(
            abs(hk.kahler_form(u, v1, v2) + hk.kahler_form(u, v2, v1)) / scale)
        om = hk.complex_symplectic(I_STRUCT, J_STRUCT, v1, v2)
        res["omega_JK_complex_bilinear"].append(
            abs(hk.complex_symplectic(I_STRUCT, J_STRUCT, act(I_STRUCT, v1), v2) - 1j * om) / scale)
        w = rng.standard_normal(3)
        w -= (w @ u.vector) * u.vector
        u1 = ComplexStructure.from_vector(w, normalize=True)
        res["complex_symplectic_bilinear_random_frame"].append(
            abs(hk.complex_symplectic(u, u1, act(u, v1), v2) - 1j * hk.complex_symplectic(u, u1, v1, v2)) / scale)
        u2 = u.cross(u1)
        theta = rng.uniform(0, 2 * np.pi)
        r1 = ComplexStructure.from_vector(np.cos(theta) * u1.vector - np.sin(theta) * u2.vector, normalize=True)
        res["frame_rotation_equivariance"].append(
            abs(hk.complex_symplectic(u, r1, v1, v2) - np.exp(1j * theta) * hk.complex_symplectic(u, u1, v1, v2)) / scale)
        e1 = hk.higgs_tangent_periods(q1, p1, P)
        e2 = hk.higgs_tangent_periods(q2, p2, P)
        match = 0.0
        for name, U in (("I", I_STRUCT), ("J", J_STRUCT), ("K", K_STRUCT)):
            image = np.split(hk.derham_structure(name, e1, P), 2)
            mapped = hk.higgs_to_quaternion(*md.periods_to_higgs(*image, P), P)
            match = max(match, _qdiff(mapped, act(U, v1)) / v1.norm())
        res["derham_structures_match_quaternions"].append(match)
        cup = cup_product(e1, e2)
        rhs = (-hk.derham_metric(hk.derham_structure("I", e1, P), e2, P)
               + 1j * hk.derham_metric(hk.derham_structure("K", e1, P), e2, P))
        res["cup_product_is_minus_omega_I_plus_i_omega_K"].append(abs(cup - rhs) / max(1.0, abs(cup)))
        gdr = hk.derham_metric(e1, e2, P)
        res["derham_metric_is_twice_flat"].append(abs(gdr - 2 * hk.metric(v1, v2)) / scale)
        herm = np.real(q1 @ (2 * P.Y) @ q2.conj() + p1 @ (2 * P.Y) @ p2.conj())
        res["unitary_coordinates_standard_hermitian"].append(abs(hk.metric(v1, v2) - herm) / scale)
        res["circle_action_hamiltonian"].append(hk.hamiltonian_residual(v1, v2) / scale)
        t = rng.uniform(0, 3)
        e0 = hk.energy(v1)
        res["energy_along_flows"].append(max(
            abs(hk.energy(hk.gradient_flow(v1, t)) - np.exp(-2 * t) * e0),
            abs(hk.energy(hk.circle_act(v1, theta)) - e0)) / max(1.0, e0))
        tstar[id(P)].append(hk.omega_cotangent(q1, p1, q2, p2, P))
        omjk[id(P)].append(om)
    tol = {"circle_action_hamiltonian": 1e-6}
    for name in names:
        ctx.record(name, res[name], tol.get(name, 1e-10))
    T = np.concatenate([np.array(tstar[id(P)]) for P in mats])
    O = np.concatenate([np.array(omjk[id(P)]) for P in mats])
    c = complex(np.vdot(O, T) / np.vdot(O, O))
    ctx.record("omega_Tstar_proportional_to_omega_JK", np.abs(T - c * O) / np.max(np.abs(T)), 1e-10)
    ctx.constant("omega_Tstar_over_omega_JK", c)
    ctx.constant("derham_metric_over_flat_metric", 2.0)
    ctx.constant("hamiltonian_sign", -1.0)
    ctx.note("cotangent symplectic form constant",
             "measured Omega_T*/Omega_(J,K) differs from the expected constant 8; "
             "value reported under constants", abs(c - 8.0))
    ctx.note("metric normalization",
             "Re of the integral of eta1 ^ *conj(eta2) equals twice the flat metric "
             "Re<Psi1,Psi2> + Re<Phi1,Phi2>; the cup product equals -omega_I + i omega_K "
             "for the former", 2.0)
    ctx.note("hamiltonian sign",
             "with omega_u(a, b) = g(u a, b) and X_e = I grad(e), omega_I(X_e, .) = -de", -1.0)


def _potential_family(ctx, label, f, structures, points, target=None):
    at_small, order = [], []
    for u in structures:
        for v in points:
            r = [hk.potential_check(u, f, v, h, target) for h in (1e-2, 1e-3)]
            at_small.append(r[1])
            order.append(max(r[0] / 1e-4, r[1] / 1e-6))
    ctx.record(f"{label}_residual_at_h_1e-3", at_small, 1e-4)
    ctx.record(f"{label}_order_h_squared", order, 10.0)
    return max(at_small)


def suite_potential(ctx: Context):
    rng = ctx.rng
    n_pts = ctx.n(4)
    points = [_qvec(rng, 1 + i % 3) for i in range(n_pts)]
    us = [I_STRUCT, J_STRUCT, K_STRUCT] + [_unit(rng) for _ in range(20)]
    _potential_family(ctx, "rho_potential_every_u", "rho", us, points)
    rotated = [ComplexStructure(0.0, np.cos(t), np.sin(t)) for t in np.arange(8) * np.pi / 4]
    _potential_family(ctx, "psi_pluriharmonic_rotated_J", "psi", rotated, points)
    thetas = np.arange(4) * np.pi / 4
    rotated4 = [ComplexStructure(0.0, np.cos(t), np.sin(t)) for t in thetas]
    worst = _potential_family(ctx, "phi_potential_rotated_J", "phi", rotated4, points)
    neg = [hk.potential_check(I_STRUCT, "phi", v, 1e-3) for v in points]
    ctx.record("phi_against_I_negative_control", neg, 1e-2, comparison=">")
    doubled = max(hk.potential_check(u, lambda w: 2 * hk.potential_phi(w), v, 1e-3, "kahler")
                  for u in rotated4 for v in points)
    # fit -1/2 d(d phi o u) = s omega_u
    u = rotated4[0]
    form = hk.ddc_form(u, hk.potential_phi, points[0], 1e-3)
    W = hk.form_matrix(u, points[0].k)
    s = float(np.sum(form * W) / np.sum(W * W))
    ctx.constant("phi_form_over_kahler_form", s)
    ctx.constant("doubled_phi_residual", doubled)
    ctx.note("half |p|^2 as Kahler potential for rotated J",
             "-1/2 d(d phi o u) equals omega_u / 2, not omega_u; |p|^2 = rho - psi/2 passes, "
             "consistent with rho and psi", worst)


def suite_quaternionization(ctx: Context):
    rng = ctx.rng
    mats = ctx.fixed_matrices()
    generic, degenerate = [], []
    for i in range(ctx.n(50)):
        P = mats[i % len(mats)]
        u = _unit(rng)
        generic.append(abs(hk.quaternionization_rank(u, P) - 4 * P.k))
    for P in mats:
        for u in (I_STRUCT, -I_STRUCT):
            degenerate.append(abs(hk.quaternionization_rank(u, P) - 2 * P.k))
        generic.append(abs(hk.quaternionization_rank(J_STRUCT, P) - 4 * P.k))
    ctx.record("full_rank_away_from_I", generic, 0)
    ctx.record("rank_2k_at_plus_minus_I", degenerate, 0)


def suite_twistor(ctx: Context):
    rng = ctx.rng
    n = ctx.n(1000)
    names = ("chart_transition", "chart_map_intertwines_i", "chart_inverse_roundtrip",
             "line_chart_consistency", "line_through_roundtrip", "line_through_matches_chart_map",
             "real_structure_involution", "real_structure_closed_form", "real_structure_covers_antipode",
             "form_gluing_xi_squared", "form_real_structure_pullback", "form_matches_conjugated_frame",
             "form_matches_pullback_by_chart", "cstar_group_law", "cstar_matches_closed_form",
             "cstar_preserves_lines", "lattice_action_follows_lines", "lattice_commutes_with_real_structure")
    res = {k: [] for k in names}
    mats = ctx.fixed_matrices((1, 2, 3))
    for i in range(n):
        P = mats[i % len(mats)]
        k = P.k
        L = Lattice.higgs_lattice(P)
        z = _zeta(rng)
        v = _cvec(rng, 2 * k)
        pt = tw.TwistorPoint(1, v, z)
        scale = np.linalg.norm(v)
        m = tw.chart_map(pt)
        res["chart_transition"].append(_qdiff(m, tw.chart_map(tw.to_chart(pt, 2))) / scale)
        res["chart_map_intertwines_i"].append(
            _qdiff(tw.chart_map(tw.TwistorPoint(1, 1j * v, z)), act(stereo_chart1(z), m)) / scale)
        res["chart_inverse_roundtrip"].append(np.max(np.abs(tw.chart_inverse(m, 1, z).v - v)) / scale)
        line = tw.TwistorLine(_cvec(rng, 2 * k))
        lv = line_scale = np.linalg.norm(line.v0)
        a = tw.line_eval(line, 1, z)
        res["line_chart_consistency"].append(
            tw.point_distance(tw.to_chart(a, 2), tw.line_eval(line, 2, 1 / z)) / lv)
        for chart, base in ((1, z), (2, z), (1, 0), (2, 0)):
            p_ = tw.line_eval(line, chart, base)
            res["line_through_roundtrip"].append(np.max(np.abs(tw.line_through(p_).v0 - line.v0)) / lv)
        res["line_through_matches_chart_map"].append(
            np.max(np.abs(tw.line_through(pt).v0 - m.to_complex())) / scale)
        for p_ in (pt, tw.TwistorPoint(2, v, z)):
            r = tw.real_structure(p_)
            res["real_structure_involution"].append(tw.point_distance(tw.real_structure(r), p_) / scale)
            res["real_structure_closed_form"].append(tw.point_distance(r, tw.real_structure_closed_form(p_)) / scale)
            res["real_structure_covers_antipode"].append(
                np.max(np.abs(tw.fiber_structure(r.chart, r.base).vector
                              + tw.fiber_structure(p_.chart, p_.base).vector)))
        al, be = _qvec(rng, k), _qvec(rng, k)
        fs = al.norm() * be.norm() * (1 + abs(z)) ** 2
        f1 = tw.fiber_form(1, z, al, be)
        res["form_gluing_xi_squared"].append(abs(tw.fiber_form(2, 1 / z, al, be) - f1 / z**2) / fs)
        res["form_real_structure_pullback"].append(
            abs(np.conj(tw.fiber_form(2, -z.conjugate(), al, be)) + f1) / fs)
        res["form_matches_conjugated_frame"].append(max(
            abs(f1 - tw.fiber_form_frame(1, z, al, be)),
            abs(tw.fiber_form(2, z, al, be) - tw.fiber_form_frame(2, z, al, be))) / fs)
        res["form_matches_pullback_by_chart"].append(max(
            abs(f1 - tw.fiber_form_pullback(1, z, al, be)),
            abs(tw.fiber_form(2, z, al, be) - tw.fiber_form_pullback(2, z, al, be))) / fs)
        l1, l2 = _cvec(rng, 1)[0], _cvec(rng, 1)[0]
        for p_ in (pt, tw.TwistorPoint(2, v, z)):
            two = tw.cstar_act(l1, tw.cstar_act(l2, p_))
            one = tw.cstar_act(l1 * l2, p_)
            res["cstar_group_law"].append(tw.point_distance(two, one) / (scale * (1 + abs(one.base))))
        got = tw.cstar_act(l1, pt)
        d = 1 + abs(z) ** 2
        q_cf = (1 + abs(l1 * z) ** 2) / d * pt.q + 1j * z * (abs(l1) ** 2 - 1) / d * pt.p.conj()
        exp1 = np.concatenate([q_cf, l1 * pt.p])
        p2 = tw.TwistorPoint(2, v, z)
        got2 = tw.cstar_act(l1, p2)
        q_cf2 = (abs(l1) ** 2 + abs(z) ** 2) / (l1 * d) * p2.q + 1j * z * (abs(l1) ** 2 - 1) / (l1 * d) * p2.p.conj()
        exp2 = np.concatenate([q_cf2, p2.p])
        res["cstar_matches_closed_form"].append(max(
            np.max(np.abs(got.v - exp1)) + abs(got.base - l1 * z),
            np.max(np.abs(got2.v - exp2)) + abs(got2.base - z / l1)) / (scale * (1 + abs(l1)) ** 2))
        moved_line = tw.line_through(tw.cstar_act(l1, a))
        other = tw.line_eval(line, 2, _zeta(rng))
        res["cstar_preserves_lines"].append(
            np.max(np.abs(tw.line_through(tw.cstar_act(l1, other)).v0 - moved_line.v0)) / (lv * (1 + abs(l1))))
        gamma = L.point(rng.integers(-3, 4, 2 * k))
        shifted = tw.TwistorLine(line.v0 + np.concatenate([gamma, np.zeros(k)]))
        for chart in (1, 2):
            lp = tw.line_eval(line, chart, z)
            res["lattice_action_follows_lines"].append(
                tw.point_distance(tw.lattice_act(gamma, lp, L), tw.line_eval(shifted, chart, z))
                / (lv + np.linalg.norm(gamma)))
        res["lattice_commutes_with_real_structure"].append(
            tw.point_distance(tw.real_structure(tw.lattice_act(gamma, pt, L)),
                              tw.lattice_act(gamma, tw.real_structure(pt), L)) / (scale + np.linalg.norm(gamma)))
    tols = {"chart_transition": 1e-12, "chart_map_intertwines_i": 1e-12,
            "real_structure_involution": 1e-12, "real_structure_closed_form": 1e-12,
            "real_structure_covers_antipode": 1e-12}
    for name in names:
        ctx.record(name, res[name], tols.get(name, 1e-10))

    # 20 lines at 8 base points each, both charts of the image
    preserve = []
    for _ in range(20):
        k = int(rng.integers(1, 4))
        line = tw.TwistorLine(_cvec(rng, 2 * k))
        for j in range(8):
            base = 0j if j == 0 else _zeta(rng)
            chart = 1 if j % 2 == 0 else 2
            p_ = tw.line_eval(line, chart, base)
            r = tw.real_structure(p_)
            preserve.append(tw.point_distance(r, tw.line_eval(line, r.chart, r.base)) / np.linalg.norm(line.v0))
    ctx.record("real_structure_preserves_lines", preserve, 1e-12)

    cr = []
    for _ in range(20):
        line = tw.TwistorLine(_cvec(rng, 2 * int(rng.integers(1, 4))))
        z = _zeta(rng)
        cr.append(max(tw.line_cauchy_riemann(line, z, h) / h**2 for h in (1e-2, 1e-3)))
    ctx.record("line_cauchy_riemann_order_h_squared", cr, 1.0)

    glue = [tw.section_glue(*[*tw.SECTIONS[s]][:3], [_zeta(rng) for _ in range(50)]) for s in tw.SECTIONS]
    ctx.record("section_gluing", glue, 1e-12)

    # fiber over zeta = 0: C* action against the Higgs-side flows
    fiber0, limit, betti0, unit = [], [], [], []
    for P in mats:
        k = P.k
        for _ in range(20):
            q, p = _cvec(rng, k), _cvec(rng, k)
            v = hk.UnitaryCoordinates(q, p)
            pt = tw.TwistorPoint(1, np.concatenate([q, p]), 0)
            theta, t = rng.uniform(0, 2 * np.pi), rng.uniform(0, 3)
            circ = hk.circle_act(v, theta)
            grad = hk.gradient_flow(v, t)
            fiber0.append(max(
                np.max(np.abs(tw.cstar_act(np.exp(1j * theta), pt).v - np.concatenate([circ.q_u, circ.p_u]))),
                np.max(np.abs(tw.cstar_act(np.exp(-t), pt).v - np.concatenate([grad.q_u, grad.p_u])))))
            lam_unit = np.exp(1j * theta)
            zz = _zeta(rng)
            pz = tw.TwistorPoint(1, np.concatenate([q, p]), zz)
            moved = tw.cstar_act(lam_unit, pz)
            unit.append(np.max(np.abs(moved.v - np.concatenate([q, lam_unit * p]))) + abs(moved.base - lam_unit * zz))
            tiny = tw.cstar_act(1e-12, tw.line_eval(tw.TwistorLine(np.concatenate([q, p])), 1, zz))
            trace = tw.line_eval(tw.line_through(tiny), 1, 0)
            limit.append(np.max(np.abs(trace.p)))
            d = md.DeRhamPoint(*np.split(_derham(rng, k).periods, 2))
            x = md.derham_to_dolbeault(d, P)
            y = md.derham_to_dolbeault(md.hamiltonian_flow(d, 1, t), P)
            shift = -0.5 * t * P.Y_inv[:, 0]
            betti0.append(max(np.max(np.abs(md.hitchin_map(y) - md.hitchin_map(x))),
                              torus_distance(y.q, x.q + shift, md.q_lattice(P))))
    ctx.record("fiber0_restricts_to_circle_and_gradient_flows", fiber0, 1e-12)
    ctx.record("unit_lambda_rotates_p_and_base", unit, 1e-12)
    ctx.record("cstar_limit_reaches_zero_section", limit, 1e-10)
    ctx.record("betti_flow_at_fiber0_moves_q_only", betti0, 1e-10)


def suite_conformance(ctx: Context):
    rng = ctx.rng
    n = ctx.n(200)
    pole_diff, pole_ratio, pole_lines = [], [], []
    general_chart2, general_base, general_chart1 = [], [], []
    lt_printed, lt_swapped = [], []
    for _ in range(n):
        k = int(rng.integers(1, 4))
        line = tw.TwistorLine(_cvec(rng, 2 * k))
        s = np.linalg.norm(line.v0)
        p0 = tw.line_eval(line, 1, 0)
        ours = tw.real_structure(p0)
        printed = tw.printed_pole_real_structure(p0)
        pole_diff.append(np.max(np.abs(printed.v - ours.v)) / np.max(np.abs(ours.v)))
        pole_ratio.append(np.max(np.abs(printed.v + ours.v)) / s)
        pole_lines.append(np.linalg.norm(printed.v - tw.line_eval(line, 2, 0).v) / s)
        z = _zeta(rng)
        pz = tw.line_eval(line, 1, z)
        g2 = tw.printed_general_real_structure(pz, chart=2)
        g1 = tw.printed_general_real_structure(pz, chart=1)
        general_chart2.append(_qdiff(tw.chart_map(g2), tw.chart_map(pz)) / s)
        general_base.append(abs(tw.fiber_structure(2, g2.base).vector + tw.fiber_structure(1, z).vector).max())
        general_chart1.append(tw.point_distance(g1, tw.to_chart(tw.real_structure(pz), 1)) / s)
        lt_printed.append(np.max(np.abs(tw.printed_line_through(pz).v0 - line.v0)) / s)
        lt_swapped.append(np.max(np.abs(tw.swap_blocks(tw.printed_line_through(pz)).v0 - line.v0)) / s)
    ctx.record("pole_formula_sign_discrepancy_detected", pole_diff, 1e-6, comparison=">")
    ctx.record("pole_formula_is_negative_of_lift", pole_ratio, 1e-12)
    ctx.record("general_formula_chart2_reading_discrepancy_detected", general_base, 1e-6, comparison=">")
    ctx.record("general_formula_agrees_as_chart1_point", general_chart1, 1e-12)
    ctx.record("line_through_display_discrepancy_detected", lt_printed, 1e-6, comparison=">")
    ctx.record("line_through_display_agrees_after_block_swap", lt_swapped, 1e-12)
    ctx.note("pole real-structure formula [-i conj(p); i conj(q)]",
             "equals minus the line-preserving lift; relative difference 2 at every sample; "
             "the printed image lies on the line of -v0 instead of v0",
             float(np.median(pole_diff)))
    ctx.note("pole real-structure formula, line preservation",
             "distance from the image to the original line, relative to |v0|",
             float(np.median(pole_lines)))
    ctx.note("general real-structure formula over -conj(xi)",
             "read in chart 2 its base is not antipodal (largest deviation of complex structure "
             "from -I shown); read as a chart-1 point it matches the lift exactly",
             float(np.max(general_base)))
    ctx.note("general real-structure formula, chart-2 reading",
             "largest H^k displacement caused by the chart-2 reading, relative to |v0|",
             float(np.max(general_chart2)))
    ctx.note("line-through display [p + i zeta conj(q); q - i zeta conj(p)]",
             "q and p blocks are swapped; after swapping it recovers the line exactly",
             float(np.median(lt_printed)))


SUITE_FUNCS = {
    "quaternion": suite_quaternion,
    "period": suite_period,
    "lattice": suite_lattice,
    "conversion": suite_conversion,
    "jpi": suite_jpi,
    "hyperkahler": suite_hyperkahler,
    "potential": suite_potential,
    "quaternionization": suite_quaternionization,
    "twistor": suite_twistor,
    "conformance": suite_conformance,
}


def run_suite(name: str, seed: int = 0, samples=None, pi=None, tol=None) -> SuiteResult:
    if name not in SUITE_FUNCS:
        raise KeyError(f"unknown suite {name!r}")
    ctx = Context(name, seed, samples, pi, tol)
    SUITE_FUNCS[name](ctx)
    return ctx.result


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def report(suite: str = "all", seed: int = 0, samples=None, pi=None, tol=None) -> dict:
    """Run one suite or ``"all"`` and assemble a deterministic report."""
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in SUITE_FUNCS:
            raise KeyError(f"unknown suite {name!r}")
    checks, constants, notes = {}, {}, []
    for name in names:
        r = run_suite(name, seed, samples, pi, tol)
        checks.update(r.checks)
        constants.update({f"{name}.{k}": v for k, v in r.constants.items()})
        notes += [{"suite": name, **n} for n in r.conformance]
    rows = []
    for key in sorted(checks):
        d = checks[key].as_dict()
        d["max_residual"] = _clean(d["max_residual"])
        rows.append(d)
    return {
        "suite": suite,
        "seed": int(seed),
        "samples": samples,
        "passed": all(r["passed"] for r in rows),
        "checks": rows,
        "constants": dict(sorted(constants.items())),
        "conformance": sorted(notes, key=lambda n: (n["suite"], n["item"])),
    }
