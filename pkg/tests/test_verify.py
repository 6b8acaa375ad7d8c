import json

import numpy as np
import pytest

from abelian_higgs import jsonio, verify
from abelian_higgs.verify import Check


def test_check_comparisons():
    assert Check("a", 1, 1e-13, 1e-12).passed
    assert not Check("a", 1, 1e-11, 1e-12).passed
    assert Check("a", 1, 2.0, 1e-6, ">").passed
    assert not Check("a", 1, float("nan"), 1.0).passed


def test_report_is_sorted_and_serializable():
    rep = verify.report("jpi", seed=1, samples=5)
    names = [c["name"] for c in rep["checks"]]
    assert names == sorted(names)
    assert all(n.startswith("jpi.") for n in names)
    json.loads(jsonio.dumps(rep))


def test_suites_are_independent_of_each_other():
    together = verify.report("all", seed=3, samples=1)
    both = {c["name"]: c for c in together["checks"]}
    again = verify.report("jpi", seed=3, samples=1)
    for c in again["checks"]:
        assert both[c["name"]] == c


def test_user_period_matrix_is_included():
    rep = verify.report("quaternionization", seed=0, samples=2, pi=[[2j]])
    assert rep["passed"]


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.report("nope")


def test_constants_reported():
    rep = verify.report("hyperkahler", seed=0, samples=20)
    c = rep["constants"]["hyperkahler.omega_Tstar_over_omega_JK"]
    assert c["re"] == pytest.approx(0, abs=1e-12)
    assert c["im"] == pytest.approx(-1, abs=1e-12)
    assert any(n["item"] == "cotangent symplectic form constant" for n in rep["conformance"])


def test_conformance_suite_passes():
    rep = verify.report("conformance", seed=0, samples=30)
    assert rep["passed"]
    assert len(rep["conformance"]) >= 3
