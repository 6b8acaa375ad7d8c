"""Acceptance criteria, one line each.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``. Every suite runs at its
default sample count with seed 0.
"""

import functools
import sys

import pytest

from abelian_higgs import verify

SEED = 0
RESULTS: dict[int, str] = {}


@functools.lru_cache(maxsize=None)
def suite(name):
    return verify.run_suite(name, SEED)


def checks(name, *wanted):
    res = suite(name).checks
    if not wanted:
        return list(res.values())
    return [res[f"{name}.{w}"] for w in wanted]


def summarize(found):
    worst = [f"{c.name.split('.', 1)[1]}={c.max_residual:.2e}{'>' if c.comparison == '>' else '<='}{c.tolerance:g}"
             for c in found if not c.passed]
    return "; ".join(worst) if worst else f"{len(found)} checks, {sum(c.samples for c in found)} samples"


def criterion_1():
    return checks("quaternion")


def criterion_2():
    return checks("period", "symmetric_relation", "hermitian_relation", "basis_change_law")


def criterion_3():
    return checks("lattice", "reduce_idempotent", "reduce_translation_invariant", "two_torsion_count",
                  "membership_agrees_with_brute_force")


def criterion_4():
    return checks("conversion", "holonomy_of_log_exact", "log_of_holonomy_mod_lattice",
                  "derham_dolbeault_roundtrip", "dolbeault_derham_roundtrip", "holonomy_homomorphism",
                  "dolbeault_homomorphism")


def criterion_5():
    return checks("jpi")


def criterion_6():
    found = checks("hyperkahler", "omega_JK_complex_bilinear", "complex_symplectic_bilinear_random_frame",
                   "cup_product_is_minus_omega_I_plus_i_omega_K", "frame_rotation_equivariance",
                   "omega_Tstar_proportional_to_omega_JK")
    assert "omega_Tstar_over_omega_JK" in suite("hyperkahler").constants
    return found


def criterion_7():
    return checks("potential")


def criterion_8():
    return checks("quaternionization")


def criterion_9():
    return checks("twistor", "chart_transition", "line_cauchy_riemann_order_h_squared",
                  "real_structure_involution", "real_structure_preserves_lines", "form_gluing_xi_squared",
                  "form_real_structure_pullback", "cstar_group_law",
                  "fiber0_restricts_to_circle_and_gradient_flows", "betti_flow_at_fiber0_moves_q_only")


def criterion_10():
    found = checks("conformance")
    assert len(suite("conformance").conformance) >= 3
    return found


CRITERIA = {
    1: ("quaternion identities, u^2 = -1, chart compatibility, antipodal law", criterion_1),
    2: ("bilinear relations of unitary periods and basis-change law", criterion_2),
    3: ("lattice reduction, 2-torsion count, membership against brute force", criterion_3),
    4: ("holonomy and Dolbeault roundtrips, homomorphism squares", criterion_4),
    5: ("J_Pi square, transport consistency, C* group law", criterion_5),
    6: ("complex-symplectic forms and cotangent-form proportionality", criterion_6),
    7: ("Kahler potentials by finite differences", criterion_7),
    8: ("quaternionization rank", criterion_8),
    9: ("twistor charts, lines, real structure, forms, C* action", criterion_9),
    10: ("conformance report on coordinate displays", criterion_10),
}


def evaluate(n):
    title, fn = CRITERIA[n]
    found = fn()
    ok = all(c.passed for c in found)
    RESULTS[n] = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {title} ({summarize(found)})"
    print(RESULTS[n])
    return ok


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    assert evaluate(n), RESULTS[n]


if __name__ == "__main__":
    sys.exit(0 if all([evaluate(n) for n in sorted(CRITERIA)]) else 1)
