from test.test_utils import (  # noqa: F401
    SCENARIO_11A,
    SCENARIO_11A_D7,
    check,
    invoke,
    read_report,
    runner,
    scenario_file,
    settings,
)


class TestVerifyFactorsCommand(object):
    """Tests for starkrankin verify-factors"""

    def run(self, runner, settings, path, tmp_path, *options, global_options=()):
        out = str(tmp_path / "report.json")
        args = list(global_options) + ["verify-factors", "--scenario", path, "--out", out] + list(options)
        return invoke(runner, settings, args), out

    def test_identities_hold(self, runner, settings, scenario_file, tmp_path):
        result, out = self.run(runner, settings, scenario_file(SCENARIO_11A), tmp_path, "--l-max", "2")
        assert result.exit_code == 0, result.output
        report = read_report(out)
        for l in range(0, 3):
            assert check(report, f"euler.l={l}")["status"] == "pass"
            assert check(report, f"assembly.l={l}")["status"] == "pass"
            assert check(report, f"general.euler.l={l}")["status"] == "pass"
            assert check(report, f"general.archimedean.l={l}")["status"] == "pass"
            assert check(report, f"general.katz_euler.l={l}")["status"] == "pass"
        assert check(report, "special.f_infty")["status"] == "pass"
        assert report["sections"]["special_values"]["f_infty(-1)"] == "-1/2"
        assert report["sections"]["interpolation_weights"] == [0, 1, 2, 3, 4]
        assert report["summary"]["fail"] == 0

    def test_weight_one_point(self, runner, settings, scenario_file, tmp_path):
        result, out = self.run(runner, settings, scenario_file(SCENARIO_11A), tmp_path, "--l-min", "-1", "--l-max", "0")
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert check(report, "euler.l=-1")["status"] == "pass"
        assert check(report, "assembly.l=-1")["status"] == "skipped"
        assert check(report, "general.katz_archimedean.l=-1")["status"] == "pass"
        assert report["sections"]["factors"]["-1"]["f_HR"] is None

    def test_not_theorem_case(self, runner, settings, scenario_file, tmp_path):
        result, out = self.run(runner, settings, scenario_file(SCENARIO_11A_D7), tmp_path, "--l-max", "1")
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert check(report, "special.f_infty")["status"] == "skipped"
        assert check(report, "assembly.l=1")["status"] == "pass"

    def test_perturbed(self, runner, settings, scenario_file, tmp_path):
        """ Scaling f_Pet breaks the assembly identity and the command fails """
        result, out = self.run(runner, settings, scenario_file(SCENARIO_11A), tmp_path,
                               "--l-max", "1", "--perturb", "f_Pet=2")
        assert result.exit_code == 2
        report = read_report(out)
        assert check(report, "assembly.l=0")["status"] == "fail"
        assert check(report, "euler.l=0")["status"] == "pass"

    def test_rejected_options(self, runner, settings, scenario_file, tmp_path):
        path = scenario_file(SCENARIO_11A)
        assert self.run(runner, settings, path, tmp_path, "--perturb", "f_X=2")[0].exit_code == 4
        assert self.run(runner, settings, path, tmp_path, "--l-min", "-2")[0].exit_code == 4
        assert self.run(runner, settings, path, tmp_path, "--l-min", "3", "--l-max", "1")[0].exit_code == 4

    def test_bad_schema(self, runner, settings, scenario_file, tmp_path):
        result, _ = self.run(runner, settings, scenario_file(SCENARIO_11A, p="three"), tmp_path)
        assert result.exit_code == 4
        assert "ScenarioError" in result.output

    def test_seed_and_timings(self, runner, settings, scenario_file, tmp_path):
        path = scenario_file(SCENARIO_11A)
        result, out = self.run(runner, settings, path, tmp_path, "--l-max", "0",
                               global_options=("--seed", "7", "--timings"))
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["seed"] == 7
        assert "euler" in report["timings"]
        result, out = self.run(runner, settings, path, tmp_path, "--l-max", "0")
        report = read_report(out)
        assert report["seed"] == 20240229
        assert "timings" not in report
