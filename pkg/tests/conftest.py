import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from abelian_higgs.period_matrix import random_period_matrix
from abelian_higgs.quaternion import ComplexStructure, QuaternionVector

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
cnum = st.builds(complex, finite, finite)
seeds = st.integers(0, 2**32 - 1)


def cvecs(k):
    return st.lists(cnum, min_size=k, max_size=k).map(lambda v: np.array(v, dtype=complex))


@st.composite
def qvectors(draw, k=None):
    k = k or draw(st.integers(1, 4))
    return QuaternionVector(draw(cvecs(k)), draw(cvecs(k)))


@st.composite
def structures(draw):
    v = np.array([draw(st.floats(-1, 1)) for _ in range(3)])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([0.0, 1.0, 0.0])
    return ComplexStructure.from_vector(v, normalize=True)


@st.composite
def period_matrices(draw, kmax=4):
    k = draw(st.integers(1, kmax))
    return random_period_matrix(np.random.default_rng(draw(seeds)), k)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
