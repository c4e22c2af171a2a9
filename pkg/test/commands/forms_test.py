import json

import click
import pytest

from starkrankin.commands import exits_with_error_code
from starkrankin.exceptions import DegenerateError
from test.test_utils import (  # noqa: F401
    SCENARIO_11A,
    SCENARIO_26A,
    check,
    invoke,
    read_report,
    runner,
    scenario_file,
    settings,
)


class TestClassgroupCommand(object):
    """Tests for starkrankin classgroup"""

    def test_field(self, runner, settings, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings, ["classgroup", "--D", "23", "--out", out])
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["command"] == "classgroup"
        assert report["sections"]["class_group"]["h"] == 3
        assert report["sections"]["class_group"]["orders"] == [3]
        assert check(report, "classgroup.genus")["status"] == "pass"
        assert report["summary"]["fail"] == 0

    def test_stdout(self, runner, settings):
        result = invoke(runner, settings, ["classgroup", "--D", "84"])
        assert result.exit_code == 0
        body = json.loads(result.output)
        assert body["sections"]["class_group"]["orders"] == [2, 2]

    def test_order(self, runner, settings, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings, ["classgroup", "--D", "7", "-c", "3", "--out", out])
        assert result.exit_code == 0
        report = read_report(out)
        assert report["sections"]["class_group"]["disc"] == -63
        assert report["sections"]["class_group"]["h"] == 4
        assert check(report, "classgroup.genus")["status"] == "skipped"

    def test_from_scenario(self, runner, settings, scenario_file, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings, ["classgroup", "--scenario", scenario_file(SCENARIO_26A), "--out", out])
        assert result.exit_code == 0
        assert read_report(out)["sections"]["class_group"]["D_K"] == 23

    def test_rejected(self, runner, settings):
        assert invoke(runner, settings, ["classgroup", "--D", "12"]).exit_code == 4
        assert invoke(runner, settings, ["classgroup"]).exit_code == 4


class TestThetaCommand(object):
    """Tests for starkrankin theta"""

    def test_class_number_one(self, runner, settings, scenario_file, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings, ["theta", "--scenario", scenario_file(SCENARIO_11A), "--out", out])
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert check(report, "theta.constant_term")["status"] == "pass"
        assert check(report, "theta.eigenform.T02")["status"] == "pass"
        assert check(report, "theta.family.l0")["status"] == "pass"
        assert check(report, "theta.family.l1")["status"] == "pass"
        assert report["sections"]["theta"]["truncation"] == 60
        assert report["scenario"]["label"] == "11a-D11-p3"

    def test_ring_class_character(self, runner, settings, scenario_file, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings,
                        ["theta", "--scenario", scenario_file(SCENARIO_26A), "-Q", "200", "--out", out])
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["sections"]["theta"]["truncation"] == 200
        assert check(report, "theta.family")["status"] == "skipped"
        assert check(report, "theta.constant_term")["status"] == "skipped"
        assert check(report, "theta.eigenform.T03")["status"] == "pass"
        assert check(report, "theta.eigenform.T19")["status"] == "pass"


class TestEisensteinCommand(object):
    """Tests for starkrankin eisenstein"""

    @pytest.mark.parametrize("D, primes", [("7", [2, 3, 5, 11, 13, 17, 19]), ("11", [2, 3, 5, 7, 13, 17, 19])])
    def test_weight_one(self, runner, settings, tmp_path, D, primes):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings, ["eisenstein", "-k", "1", "--D", D, "-Q", "200", "--out", out])
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert check(report, "eisenstein.theta")["status"] == "pass"
        for l in primes:
            assert check(report, f"eisenstein.eigenform.T{l:02d}")["status"] == "pass"
        assert "normalisation" in report["sections"]["eisenstein"]

    def test_parity(self, runner, settings):
        result = invoke(runner, settings, ["eisenstein", "-k", "2", "--D", "7"])
        assert result.exit_code == 1
        assert "DomainError" in result.output


def test_error_codes(runner):
    """ StarkError subclasses leave with their own exit code """

    @click.command()
    @exits_with_error_code
    def degenerate():
        raise DegenerateError("lambda vanishes", factor="f_p(f,psi)")

    result = runner.invoke(degenerate, [])
    assert result.exit_code == 3
    assert "f_p(f,psi)" in result.output
