import json
import subprocess
import sys

import numpy as np
import pytest

from abelian_higgs.cli import main, parse_complex

PI = '{"k": 1, "Pi": [[{"re": 0, "im": 1}]]}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def cvals(obj):
    return np.array([complex(z["re"], z["im"]) for z in obj])


@pytest.fixture
def pi_file(tmp_path):
    path = tmp_path / "pi.json"
    path.write_text(PI)
    return str(path)


def test_parse_complex():
    assert parse_complex("i") == 1j
    assert parse_complex("-i") == -1j
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex("0.5") == 0.5


class TestValidate:
    def test_valid(self, capsys, pi_file):
        code, out = run(capsys, "validate", pi_file)
        assert code == 0 and out["valid"]

    def test_asymmetric(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"Pi": [[{"im": 1}, {"re": 1}], [{"re": 2}, {"im": 1}]]}))
        code, out = run(capsys, "validate", str(path))
        assert code == 1 and out["error"] == "NotSymmetric"

    def test_malformed(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert run(capsys, "validate", str(path))[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "validate", str(tmp_path / "none.json"))[0] == 2


class TestConvert:
    def test_trivial_character(self, capsys, pi_file):
        point = '{"system": "betti", "rhoA": [1], "rhoB": [1]}'
        code, out = run(capsys, "convert", "--from", "betti", "--to", "dolbeault", "--pi", pi_file, "--point", point)
        assert code == 0
        np.testing.assert_allclose(cvals(out["q"]), [0], atol=1e-15)
        np.testing.assert_allclose(cvals(out["p"]), [0], atol=1e-15)

    def test_real_periods(self, capsys, pi_file):
        point = '{"system": "derham", "a": [{"re": 2, "im": 0}], "b": [{"re": 0, "im": 0}]}'
        code, out = run(capsys, "convert", "--from", "derham", "--to", "dolbeault", "--pi", pi_file, "--point", point)
        np.testing.assert_allclose(cvals(out["q"]), [0], atol=1e-15)
        np.testing.assert_allclose(cvals(out["p"]), [1], atol=1e-15)

    def test_roundtrip(self, capsys, pi_file):
        point = '{"system": "dolbeault", "q": [{"re": 0.4, "im": 2.9}], "p": [{"re": -1, "im": 0.5}]}'
        code, out = run(capsys, "convert", "--from", "dolbeault", "--to", "betti", "--pi", pi_file,
                        "--point", point, "--roundtrip")
        assert code == 0 and out["roundtrip_residual"] < 1e-9

    def test_genus_mismatch(self, capsys, pi_file):
        point = '{"system": "derham", "a": [0, 0], "b": [0, 0]}'
        assert run(capsys, "convert", "--from", "derham", "--to", "dolbeault", "--pi", pi_file, "--point", point)[0] == 1

    def test_needs_pi(self, capsys):
        point = '{"system": "derham", "a": [0], "b": [0]}'
        assert run(capsys, "convert", "--from", "derham", "--to", "dolbeault", "--point", point)[0] == 2


class TestAct:
    point = '{"system": "dolbeault", "q": [{"re": 0.5, "im": 1.0}], "p": [{"re": 1, "im": -2}]}'

    def test_cstar_one(self, capsys, pi_file):
        code, out = run(capsys, "act", "--cstar", "1", "--pi", pi_file, "--point", self.point)
        assert code == 0
        np.testing.assert_allclose(cvals(out["p"]), [1 - 2j])
        np.testing.assert_allclose(cvals(out["q"]), [0.5 + 1j])

    def test_iota_twice(self, capsys, pi_file, tmp_path):
        _, once = run(capsys, "act", "--iota", "U", "--pi", pi_file, "--point", self.point)
        path = tmp_path / "once.json"
        path.write_text(json.dumps(once))
        _, twice = run(capsys, "act", "--iota", "U", "--pi", pi_file, "--point", str(path))
        np.testing.assert_allclose(cvals(twice["q"]), [0.5 + 1j])
        np.testing.assert_allclose(cvals(twice["p"]), [1 - 2j])

    def test_cstar_on_higgs_periods(self, capsys, pi_file):
        point = '{"system": "higgs_periods", "alpha": [1], "beta": [0]}'
        code, out = run(capsys, "act", "--cstar", "i", "--pi", pi_file, "--point", point)
        assert code == 0
        np.testing.assert_allclose([out["alpha"][0], out["beta"][0]], [0, -1], atol=1e-15)

    def test_zero_lambda(self, capsys, pi_file):
        assert run(capsys, "act", "--cstar", "0", "--pi", pi_file, "--point", self.point)[0] == 1

    def test_gradient(self, capsys, pi_file):
        _, out = run(capsys, "act", "--gradient", str(np.log(2)), "--pi", pi_file, "--point", self.point)
        np.testing.assert_allclose(cvals(out["p"]), [0.5 - 1j])

    def test_flow_full_circle_on_betti(self, capsys):
        point = '{"system": "betti", "rhoA": [2], "rhoB": [{"re": 0, "im": 3}]}'
        _, out = run(capsys, "act", "--flow", f"1,{2 * np.pi}", "--point", point)
        np.testing.assert_allclose(cvals(out["rhoB"]), [3j], atol=1e-14)

    def test_bad_flow_argument(self, capsys):
        point = '{"system": "betti", "rhoA": [2], "rhoB": [1]}'
        assert run(capsys, "act", "--flow", "x", "--point", point)[0] == 2


class TestTwistor:
    def test_line_sample(self, capsys):
        code, out = run(capsys, "twistor", "--line", "[1, 0]", "--at", "i")
        assert code == 0
        np.testing.assert_allclose(cvals(out["points"][0]["v"]), [1, 1], atol=1e-15)

    def test_line_sample_count(self, capsys):
        _, out = run(capsys, "twistor", "--line", '{"v0": [1, 0]}', "--sample", "5")
        assert len(out["points"]) == 5

    def test_transition(self, capsys):
        _, out = run(capsys, "twistor", "--transition", '{"chart": 1, "base": 2, "v": [1, 2]}')
        assert out["chart"] == 2
        np.testing.assert_allclose(cvals(out["v"]), [0.5, 1])

    def test_realstruct_twice(self, capsys, tmp_path):
        pt = '{"chart": 1, "base": {"re": 0.3, "im": -1}, "v": [1, {"re": 0, "im": 2}]}'
        _, once = run(capsys, "twistor", "--realstruct", pt)
        _, twice = run(capsys, "twistor", "--realstruct", json.dumps(once))
        assert twice["chart"] == 1
        np.testing.assert_allclose(cvals(twice["v"]), [1, 2j], atol=1e-15)

    def test_parse_error(self, capsys):
        assert run(capsys, "twistor", "--realstruct", '{"chart": 1}')[0] == 2


class TestVerify:
    def test_quaternion_suite_passes(self, capsys):
        code, out = run(capsys, "verify", "--suite", "quaternion")
        assert code == 0 and out["passed"]

    def test_unknown_suite(self, capsys):
        assert run(capsys, "verify", "--suite", "nope")[0] == 2

    def test_exit_code_follows_report(self, capsys):
        code, out = run(capsys, "verify", "--suite", "potential", "--samples", "1")
        assert code == (0 if out["passed"] else 1)

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("HIGGS_SEED", "5")
        _, out = run(capsys, "verify", "--suite", "jpi", "--samples", "3")
        assert out["seed"] == 5

    def test_tol_override(self, capsys):
        _, out = run(capsys, "--tol", "1e-30", "verify", "--suite", "jpi", "--samples", "3")
        assert not out["passed"]

    def test_byte_identical_reports(self):
        cmd = [sys.executable, "-m", "abelian_higgs.cli", "verify", "--suite", "twistor", "--seed", "9",
               "--samples", "20"]
        a = subprocess.run(cmd, capture_output=True, check=False)
        b = subprocess.run(cmd, capture_output=True, check=False)
        assert a.returncode == 0
        assert a.stdout == b.stdout and a.stdout
