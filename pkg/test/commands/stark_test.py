from test.test_utils import (  # noqa: F401
    SCENARIO_11A,
    SCENARIO_11A_D7,
    SCENARIO_26A,
    SCENARIO_43A,
    check,
    invoke,
    read_report,
    runner,
    scenario_file,
    settings,
)


class TestLambdaCommand(object):
    """Tests for starkrankin lambda"""

    def test_theorem_case(self, runner, settings, scenario_file, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings, ["lambda", "--scenario", scenario_file(SCENARIO_11A), "--out", out])
        assert result.exit_code == 0, result.output
        report = read_report(out)
        body = report["sections"]["lambda"]
        assert body["general"]["exact"] == "25/6"
        assert body["theorem"]["exact"] == "25/6"
        assert body["christmas"]["exact"] == "25/6"
        assert body["breakdown"]["f_infty(-1)"] == "-1/2"
        assert body["breakdown"]["f_p(f,psi)"] == "25/9"
        assert body["breakdown"]["f_p(psi^-2)"] == "-1/3"
        assert body["lambda_0_branch"] == "psi^2 = 1"
        assert check(report, "lambda.general_vs_theorem")["status"] == "pass"
        assert check(report, "lambda.general_vs_christmas")["status"] == "pass"
        assert check(report, "lambda.theorem_vs_christmas")["status"] == "pass"
        assert report["sections"]["euler_ratio"]["Eul_HR"]["value"] == "1"

    def test_quadratic_extension(self, runner, settings, scenario_file, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings, ["lambda", "--scenario", scenario_file(SCENARIO_11A_D7), "--out", out])
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["sections"]["lambda"]["general"]["padic"] is None
        assert check(report, "lambda.general_vs_theorem")["status"] == "skipped"
        assert check(report, "lambda.general_vs_christmas")["status"] == "skipped"
        assert report["sections"]["euler_ratio"]["Eul_Pet"]["reconstructed"] is True
        assert any("reconstructed" in note for note in report["notes"])

    def test_ring_class_character(self, runner, settings, scenario_file, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings, ["lambda", "--scenario", scenario_file(SCENARIO_26A), "--out", out])
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["sections"]["lambda"]["lambda_0_branch"] == "psi^2 != 1"
        assert check(report, "lambda.general_vs_christmas")["status"] == "skipped"

    def test_deterministic(self, runner, settings, scenario_file, tmp_path):
        path = scenario_file(SCENARIO_11A)
        first, second = str(tmp_path / "first.json"), str(tmp_path / "second.json")
        assert invoke(runner, settings, ["lambda", "--scenario", path, "--out", first]).exit_code == 0
        assert invoke(runner, settings, ["lambda", "--scenario", path, "--out", second]).exit_code == 0
        with open(first, encoding="utf-8") as a, open(second, encoding="utf-8") as b:
            assert a.read() == b.read()


class TestRecoverCommand(object):
    """Tests for starkrankin recover"""

    def test_rank_one(self, runner, settings, scenario_file, tmp_path):
        """ The point predicted from (0, 0) on 43a is recovered up to sign """
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings,
                        ["recover", "--scenario", scenario_file(SCENARIO_43A), "--synthetic", "--out", out])
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert check(report, "recover.match")["status"] == "pass"
        body = report["sections"]["recover"]
        assert body["unit_log_source"] == "elliptic unit"
        assert body["integral_source"] == "predicted from the Heegner point"
        assert body["plus"] != "O"

    def test_torsion_point(self, runner, settings, scenario_file, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings,
                        ["recover", "--scenario", scenario_file(SCENARIO_11A), "--synthetic", "--out", out])
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert check(report, "recover.match")["status"] == "pass"
        assert check(report, "recover.match")["torsion"] is True
        assert report["sections"]["recover"]["plus"] == "O"

    def test_missing_inputs(self, runner, settings, scenario_file):
        assert invoke(runner, settings, ["recover", "--scenario", scenario_file(SCENARIO_11A)]).exit_code == 4
        no_point = scenario_file(SCENARIO_11A, name="no_point.json", inputs={})
        assert invoke(runner, settings, ["recover", "--scenario", no_point, "--synthetic"]).exit_code == 4
        assert invoke(runner, settings, ["recover", "--scenario", scenario_file(SCENARIO_26A)]).exit_code == 4


class TestAllCommand(object):
    """Tests for starkrankin all"""

    def test_all_suites(self, runner, settings, scenario_file, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings,
                        ["all", "--scenario", scenario_file(SCENARIO_11A), "--synthetic", "--out", out])
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["command"] == "all"
        for name in ("classgroup.genus", "theta.constant_term", "euler.l=0", "assembly.l=5",
                     "lambda.general_vs_theorem", "recover.match"):
            assert check(report, name)["status"] == "pass"
        assert report["summary"]["fail"] == 0

    def test_without_integral(self, runner, settings, scenario_file, tmp_path):
        out = str(tmp_path / "report.json")
        result = invoke(runner, settings, ["all", "--scenario", scenario_file(SCENARIO_11A), "--out", out])
        assert result.exit_code == 0, result.output
        assert check(read_report(out), "recover.match")["status"] == "skipped"


def test_clear_cache(runner, settings):
    """ clear-cache empties the class group cache """
    result = invoke(runner, settings, ["clear-cache"])
    assert result.exit_code == 0
    assert "cache cleared" in result.output
