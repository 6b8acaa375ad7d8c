import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelian_higgs.errors import ChartError, NotUnitSphere
from abelian_higgs.quaternion import (I_STRUCT, J_STRUCT, K_STRUCT, ONE, QI, QJ, QK,
                                      ComplexStructure, Quaternion, QuaternionVector,
                                      act, antipode, antipode_chart, antipode_chart1,
                                      chart_conjugator, conjugated_frame, explicit_stereo1,
                                      explicit_stereo2, hamilton, real_matrix, stereo_array,
                                      stereo_chart1, stereo_chart2)

from conftest import cnum, qvectors, structures

quats = st.builds(Quaternion, *[st.floats(-5, 5)] * 4)


def assert_quat(a, b, tol=1e-14):
    assert (a - b).norm() <= tol, (a, b)


def assert_qvec(a, b, tol=1e-13):
    assert np.max(np.abs(a.to_complex() - b.to_complex()), initial=0.0) <= tol, (a, b)


class TestQuaternionAlgebra:
    def test_basis_products(self):
        assert_quat(QI * QJ, QK)
        assert_quat(QJ * QK, QI)
        assert_quat(QK * QI, QJ)
        assert_quat(QJ * QI, -QK)
        for b in (QI, QJ, QK):
            assert_quat(b * b, -ONE)

    def test_one_is_neutral(self):
        a = Quaternion(1.5, -2.0, 0.25, 3.0)
        assert_quat(ONE * a, a)
        assert_quat(a * 1, a)

    def test_one_plus_I_times_one_minus_I(self):
        assert_quat((1 + QI) * (1 - QI), 2 * ONE)

    def test_complex_scalars_embed_along_I(self):
        assert_quat(Quaternion.from_complex(2 + 3j), 2 + 3 * QI)
        assert_quat(1j * QJ, QK)

    def test_pair_roundtrip(self):
        a = Quaternion.from_pair(1 - 2j, 0.5 + 4j)
        assert a.pair == (1 - 2j, 0.5 + 4j)
        assert_quat(a, Quaternion.from_complex(1 - 2j) + Quaternion.from_complex(0.5 + 4j) * QJ)

    @given(quats, quats)
    def test_norm_multiplicative(self, a, b):
        assert (a * b).norm() == pytest.approx(a.norm() * b.norm(), rel=1e-12, abs=1e-12)

    @given(quats, quats, quats)
    def test_associative(self, a, b, c):
        assert_quat((a * b) * c, a * (b * c), tol=1e-10)

    @given(quats)
    def test_inverse(self, a):
        if a.norm() < 1e-3:
            return
        assert_quat(a * a.inverse(), ONE, tol=1e-12)

    def test_zero_has_no_inverse(self):
        with pytest.raises(ZeroDivisionError):
            Quaternion().inverse()

    @given(quats, quats)
    def test_batched_kernel_matches(self, a, b):
        np.testing.assert_allclose(hamilton(a.as_array(), b.as_array()), (a * b).as_array(), atol=1e-12)


class TestAction:
    def test_I_multiplies_by_i(self):
        v = QuaternionVector([1 + 2j, -1j], [3, 0.5 - 1j])
        assert_qvec(act(I_STRUCT, v), QuaternionVector(1j * v.q, 1j * v.p))

    def test_J_action(self):
        # J (q + pJ) = conj(q) J + J p J = -conj(p) + conj(q) J
        v = QuaternionVector([1 + 2j, -1j], [3, 0.5 - 1j])
        assert_qvec(act(J_STRUCT, v), QuaternionVector(-v.p.conj(), v.q.conj()))

    def test_K_on_unit_q(self):
        assert_qvec(act(K_STRUCT, QuaternionVector([1], [0])), QuaternionVector([0], [1j]))

    @given(structures(), qvectors())
    def test_u_squared_is_minus_one(self, u, v):
        assert_qvec(act(u, act(u, v)), -v, tol=1e-12)

    @given(quats, quats, qvectors())
    def test_left_module(self, a, b, v):
        assert_qvec(act(a, act(b, v)), act(a * b, v), tol=1e-9)

    @given(structures(), qvectors(k=2))
    def test_real_matrix_matches_action(self, u, v):
        np.testing.assert_allclose(real_matrix(u, 2) @ v.to_real(), act(u, v).to_real(), atol=1e-12)

    def test_rmul_dispatches_to_action(self):
        v = QuaternionVector([1], [2j])
        assert_qvec(QJ * v, act(J_STRUCT, v))
        assert_qvec(K_STRUCT * v, act(QK, v))
        assert_qvec(v * 2.0, QuaternionVector([2], [4j]))

    @given(qvectors())
    def test_real_coordinates_roundtrip(self, v):
        assert_qvec(QuaternionVector.from_real(v.to_real()), v, tol=0)


class TestComplexStructure:
    def test_rejects_non_unit(self):
        with pytest.raises(NotUnitSphere):
            ComplexStructure(1.0, 1.0, 0.0)

    def test_cross_products(self):
        assert I_STRUCT.cross(J_STRUCT).allclose(K_STRUCT)
        assert J_STRUCT.cross(K_STRUCT).allclose(I_STRUCT)

    def test_stereo_examples(self):
        assert stereo_chart1(0).allclose(I_STRUCT)
        assert stereo_chart1(1).allclose(J_STRUCT)
        assert stereo_chart2(1).allclose(J_STRUCT)
        assert stereo_chart1(1j).allclose(K_STRUCT)
        assert stereo_chart2(0).allclose(-I_STRUCT)

    def test_antipode_examples(self):
        assert antipode(I_STRUCT).allclose(-I_STRUCT)
        assert antipode(stereo_chart1(1)).allclose(-J_STRUCT)
        u = stereo_chart1(0.3 - 2j)
        assert antipode(antipode(u)).allclose(u)

    @given(cnum)
    def test_charts_agree_on_overlap(self, z):
        if abs(z) < 1e-3:
            return
        assert stereo_chart1(z).allclose(stereo_chart2(1 / z), tol=1e-12)

    @given(cnum)
    def test_closed_forms(self, z):
        assert stereo_chart1(z).allclose(explicit_stereo1(z), tol=1e-12)
        assert stereo_chart2(z).allclose(explicit_stereo2(z), tol=1e-12)
        np.testing.assert_allclose(stereo_array(1, np.array([z]))[0], explicit_stereo1(z).vector, atol=1e-12)

    @given(cnum)
    def test_antipodal_chart_rules(self, z):
        assert stereo_chart2(antipode_chart(z)).allclose(-stereo_chart1(z), tol=1e-12)
        if abs(z) > 1e-3:
            assert stereo_chart1(antipode_chart1(z)).allclose(-stereo_chart1(z), tol=1e-12)

    def test_antipode_chart1_undefined_at_pole(self):
        with pytest.raises(ChartError):
            antipode_chart1(0)

    @settings(max_examples=50)
    @given(st.integers(1, 2), cnum)
    def test_conjugated_frame_is_right_handed(self, chart, z):
        I_, J_, K_ = conjugated_frame(chart, z)
        assert I_.cross(J_).allclose(K_, tol=1e-10)
        h = chart_conjugator(chart, z)
        assert_quat(h * QI * h.inverse(), I_.quaternion, tol=1e-10)
