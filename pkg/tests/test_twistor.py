import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelian_higgs import hyperkahler as hk
from abelian_higgs import twistor as tw
from abelian_higgs.errors import ChartError, NotLatticeVector
from abelian_higgs.period_matrix import Lattice, validate
from abelian_higgs.quaternion import J_STRUCT, K_STRUCT, QuaternionVector, act, stereo_chart1
from abelian_higgs.twistor import TwistorLine, TwistorPoint

from conftest import cnum, cvecs, qvectors

nonzero = cnum.filter(lambda z: 0.05 < abs(z) < 20)
lines = st.integers(1, 3).flatmap(lambda k: cvecs(2 * k)).map(TwistorLine)
charts = st.sampled_from([1, 2])

SQUARE = validate([[1j]])
L_SQUARE = Lattice.higgs_lattice(SQUARE)


def close(a: TwistorPoint, b: TwistorPoint, tol=1e-12):
    assert tw.point_distance(a, b) <= tol * max(1.0, np.abs(a.v).max(initial=0)), (a, b)


class TestCharts:
    def test_pole_is_identity(self):
        v = [1 + 2j, -0.5j]
        m = tw.chart_map(TwistorPoint(1, v, 0))
        np.testing.assert_array_equal(m.to_complex(), v)

    def test_other_pole_multiplies_by_K(self):
        q, p = 1 + 2j, -0.5j
        m = tw.chart_map(TwistorPoint(2, [q, p], 0))
        np.testing.assert_allclose(m.to_complex(), [-1j * np.conj(p), 1j * np.conj(q)], atol=1e-15)

    def test_transition_halves_fiber(self):
        pt = tw.to_chart(TwistorPoint(1, [1, 2], 2), 2)
        assert pt.chart == 2 and pt.base == 0.5
        np.testing.assert_allclose(pt.v, [0.5, 1])

    def test_transition_undefined_at_pole(self):
        with pytest.raises(ChartError):
            tw.to_chart(TwistorPoint(1, [1, 0], 0), 2)

    def test_bad_chart(self):
        with pytest.raises(ChartError):
            TwistorPoint(3, [1, 0], 0)

    @given(lines.flatmap(lambda l: cvecs(2 * l.k)), nonzero)
    def test_transition_preserves_value(self, v, z):
        pt = TwistorPoint(1, v, z)
        a, b = tw.chart_map(pt), tw.chart_map(tw.to_chart(pt, 2))
        np.testing.assert_allclose(a.to_complex(), b.to_complex(), atol=1e-12 * max(1, np.abs(v).max()))

    @given(charts, nonzero, qvectors())
    def test_chart_inverse(self, chart, z, m):
        back = tw.chart_map(tw.chart_inverse(m, chart, z))
        np.testing.assert_allclose(back.to_complex(), m.to_complex(), atol=1e-12 * max(1, m.norm()))


class TestLines:
    def test_example_value(self):
        pt = tw.line_eval(TwistorLine([1, 0]), 1, 1j)
        np.testing.assert_allclose(pt.v, [1, 1], atol=1e-15)

    def test_zero_fiber_anchor(self):
        line = TwistorLine([1 + 1j, 2, -1j, 0.5])
        np.testing.assert_array_equal(tw.line_eval(line, 1, 0).v, line.v0)

    def test_chart2_pole(self):
        np.testing.assert_allclose(tw.line_eval(TwistorLine([1, 0]), 2, 0).v, [0, -1j], atol=1e-15)

    def test_line_through_example(self):
        np.testing.assert_allclose(tw.line_through(TwistorPoint(1, [1, 1], 1j)).v0, [1, 0], atol=1e-15)

    @given(lines, charts, cnum)
    def test_roundtrip(self, line, chart, z):
        back = tw.line_through(tw.line_eval(line, chart, z))
        np.testing.assert_allclose(back.v0, line.v0, atol=1e-11 * max(1, np.abs(line.v0).max()))

    @given(lines, nonzero)
    def test_constant_value_along_line(self, line, z):
        for chart in (1, 2):
            np.testing.assert_allclose(tw.chart_map(tw.line_eval(line, chart, z)).to_complex(),
                                       line.v0, atol=1e-11 * max(1, np.abs(line.v0).max()))

    @settings(max_examples=30)
    @given(lines, nonzero)
    def test_holomorphic(self, line, z):
        scale = max(1.0, np.abs(line.v0).max())
        r2, r3 = (tw.line_cauchy_riemann(line, z, h) for h in (1e-2, 1e-3))
        assert r3 <= 1e-6 * scale * (1 + abs(z)) ** 2
        assert r2 <= 1e-4 * scale * (1 + abs(z)) ** 2


class TestRealStructure:
    def test_pole_image(self):
        q, p = 1 + 2j, 3 - 1j
        r = tw.real_structure(TwistorPoint(1, [q, p], 0))
        assert r.chart == 2 and r.base == 0
        np.testing.assert_allclose(r.v, [1j * np.conj(p), -1j * np.conj(q)], atol=1e-15)

    @given(charts, cnum, lines.flatmap(lambda l: cvecs(2 * l.k)))
    def test_involution_and_closed_form(self, chart, z, v):
        pt = TwistorPoint(chart, v, z)
        r = tw.real_structure(pt)
        close(tw.real_structure(r), pt)
        close(r, tw.real_structure_closed_form(pt))
        np.testing.assert_allclose(tw.fiber_structure(r.chart, r.base).vector,
                                   -tw.fiber_structure(chart, z).vector, atol=1e-12)

    def test_preserves_unit_line(self):
        line = TwistorLine([1, 0])
        for z in [0, 1, 1j, -2, 0.3 + 0.1j, 5j, -1 - 1j, 0.01]:
            for chart in (1, 2):
                r = tw.real_structure(tw.line_eval(line, chart, z))
                close(r, tw.line_eval(line, r.chart, r.base))

    @given(lines, charts, cnum)
    def test_preserves_lines(self, line, chart, z):
        r = tw.real_structure(tw.line_eval(line, chart, z))
        close(r, tw.line_eval(line, r.chart, r.base), tol=1e-11)


class TestLatticeAction:
    gamma = np.array([np.pi])

    def test_pole(self):
        out = tw.lattice_act(self.gamma, TwistorPoint(1, [1, 2], 0), L_SQUARE)
        np.testing.assert_allclose(out.v, [1 + np.pi, 2])

    def test_general_base(self):
        z = 0.5 + 1j
        out = tw.lattice_act(self.gamma, TwistorPoint(1, [1, 2], z), L_SQUARE)
        np.testing.assert_allclose(out.v, [1 + np.pi, 2 - 1j * z * np.pi])

    def test_chart2_pole(self):
        out = tw.lattice_act(self.gamma, TwistorPoint(2, [1, 2], 0), L_SQUARE)
        np.testing.assert_allclose(out.v, [1, 2 - 1j * np.pi])

    def test_rejects_non_lattice_vector(self):
        with pytest.raises(NotLatticeVector):
            tw.lattice_act([1.0], TwistorPoint(1, [1, 2], 0), L_SQUARE)

    @given(st.integers(-3, 3), st.integers(-3, 3), charts, cnum)
    def test_free_and_commutes_with_real_structure(self, m, n, chart, z):
        gamma = L_SQUARE.point([m, n])
        pt = TwistorPoint(chart, [0.2 - 1j, 1.5], z)
        moved = tw.lattice_act(gamma, pt, L_SQUARE)
        if m or n:
            assert tw.point_distance(moved, pt) > 1
        close(tw.real_structure(moved), tw.lattice_act(gamma, tw.real_structure(pt), L_SQUARE), tol=1e-11)


class TestCStar:
    def test_example(self):
        out = tw.cstar_act(2, TwistorPoint(1, [0, 1], 1))
        np.testing.assert_allclose(out.v, [1.5j, 2], atol=1e-15)
        assert out.base == 2

    @given(st.floats(0, 2 * np.pi), cnum, cvecs(2))
    def test_unit_lambda(self, theta, z, v):
        lam = np.exp(1j * theta)
        out = tw.cstar_act(lam, TwistorPoint(1, v, z))
        np.testing.assert_allclose(out.v, [v[0], lam * v[1]], atol=1e-11 * max(1, np.abs(v).max()) * (1 + abs(z)))
        assert out.base == pytest.approx(lam * z)

    @given(st.floats(0.01, 100), cvecs(2))
    def test_positive_lambda_on_pole(self, lam, v):
        out = tw.cstar_act(lam, TwistorPoint(1, v, 0))
        np.testing.assert_allclose(out.v, [v[0], lam * v[1]], rtol=1e-12)

    @given(nonzero, nonzero, charts, cnum, cvecs(4))
    def test_group_law(self, l1, l2, chart, z, v):
        pt = TwistorPoint(chart, v, z)
        a = tw.cstar_act(l1, tw.cstar_act(l2, pt))
        b = tw.cstar_act(l1 * l2, pt)
        scale = max(1, np.abs(v).max()) * (1 + abs(z)) ** 2 * (1 + abs(l1)) ** 2 * (1 + abs(l2)) ** 2
        assert tw.point_distance(a, b) <= 1e-11 * scale

    def test_zero_lambda(self):
        with pytest.raises(ValueError):
            tw.cstar_act(0, TwistorPoint(1, [1, 1], 0))

    def test_fiber_zero_matches_higgs_flows(self):
        x = hk.UnitaryCoordinates([0.3 + 1j], [2 - 1j])
        pt = TwistorPoint(1, [0.3 + 1j, 2 - 1j], 0)
        flowed = hk.gradient_flow(x, 0.7)
        np.testing.assert_allclose(tw.cstar_act(np.exp(-0.7), pt).p, flowed.p_u)
        turned = hk.circle_act(x, 1.2)
        np.testing.assert_allclose(tw.cstar_act(np.exp(1.2j), pt).p, turned.p_u)


class TestFiberForm:
    rng = np.random.default_rng(11)
    a = QuaternionVector(*(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))))
    b = QuaternionVector(*(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))))

    def test_poles(self):
        assert tw.fiber_form(1, 0, self.a, self.b) == pytest.approx(hk.omega_frame(J_STRUCT, K_STRUCT, self.a, self.b))
        assert tw.fiber_form(2, 0, self.a, self.b) == pytest.approx(hk.omega_frame(-J_STRUCT, K_STRUCT, self.a, self.b))

    @given(charts, cnum)
    def test_expansion_matches_frame_and_pullback(self, chart, z):
        f = tw.fiber_form(chart, z, self.a, self.b)
        scale = (1 + abs(z)) ** 2
        assert abs(f - tw.fiber_form_frame(chart, z, self.a, self.b)) <= 1e-10 * scale
        assert abs(f - tw.fiber_form_pullback(chart, z, self.a, self.b)) <= 1e-10 * scale

    @given(nonzero)
    def test_gluing(self, z):
        f1 = tw.fiber_form(1, z, self.a, self.b)
        assert abs(tw.fiber_form(2, 1 / z, self.a, self.b) - f1 / z**2) <= 1e-10 * (1 + abs(z)) ** 2

    @given(cnum)
    def test_real_structure_pullback(self, z):
        f1 = tw.fiber_form(1, z, self.a, self.b)
        f2 = tw.fiber_form(2, -np.conj(z), self.a, self.b)
        assert abs(np.conj(f2) + f1) <= 1e-10 * (1 + abs(z)) ** 2

    @given(cnum)
    def test_holomorphic_for_fiber_structure(self, z):
        u = stereo_chart1(z)
        lhs = tw.fiber_form(1, z, act(u, self.a), self.b)
        assert abs(lhs - 1j * tw.fiber_form(1, z, self.a, self.b)) <= 1e-10 * (1 + abs(z)) ** 2

    def test_sections_glue(self):
        samples = [0.5, 2j, -1 + 1j]
        for d, s1, s2 in tw.SECTIONS.values():
            assert tw.section_glue(d, s1, s2, samples) <= 1e-14
        with pytest.raises(ChartError):
            tw.section_glue(2, *list(tw.SECTIONS["delta"])[1:], [0])

    def test_wrong_degree_is_detected(self):
        _, s1, s2 = tw.SECTIONS["delta"]
        assert tw.section_glue(1, s1, s2, [2.0]) > 0.1


class TestPrintedFormulas:
    line = TwistorLine([1 + 0.5j, -0.3, 2j, 0.7 - 1j])

    def test_pole_formula_is_negated(self):
        pt = tw.line_eval(self.line, 1, 0)
        np.testing.assert_allclose(tw.printed_pole_real_structure(pt).v, -tw.real_structure(pt).v)

    def test_general_formula_reads_as_chart1(self):
        pt = tw.line_eval(self.line, 1, 0.4 - 2j)
        close(tw.printed_general_real_structure(pt, chart=1), tw.to_chart(tw.real_structure(pt), 1))

    def test_general_formula_chart2_base_not_antipodal(self):
        pt = tw.line_eval(self.line, 1, 0.4 - 2j)
        img = tw.printed_general_real_structure(pt, chart=2)
        assert not tw.fiber_structure(2, img.base).allclose(-tw.fiber_structure(1, pt.base), tol=1e-3)

    def test_line_through_display_swapped(self):
        pt = tw.line_eval(self.line, 1, 1.5j)
        printed = tw.printed_line_through(pt)
        assert np.abs(printed.v0 - self.line.v0).max() > 0.1
        np.testing.assert_allclose(tw.swap_blocks(printed).v0, self.line.v0, atol=1e-14)
