""" Tests for report building and rendering. """
import json
from fractions import Fraction

from starkrankin import __version__
from starkrankin.exactalg import CyclotomicElement
from starkrankin.utils import FAIL, PASS, SKIPPED, ReportBuilder, render, status_of


def test_status():
    """ True, False and None map to pass, fail and skipped """
    assert status_of(True) == PASS
    assert status_of(False) == FAIL
    assert status_of(None) == SKIPPED


def test_render():
    """ Exact values render as strings or coordinate vectors """
    assert render(None) is None
    assert render(True) is True
    assert render(3) == "3"
    assert render(Fraction(-1, 2)) == "-1/2"
    assert render([1, Fraction(1, 3)]) == ["1", "1/3"]
    assert render(CyclotomicElement.zeta(3)) == {"order": 3, "coeffs": ["0", "1"]}


class TestReportBuilder(object):
    """The report dictionary and its serialisation"""

    def test_global_block(self):
        report = ReportBuilder("lambda", seed=7)
        assert report["command"] == "lambda"
        assert report["seed"] == 7
        assert report["versions"]["starkrankin"] == __version__
        assert report["checks"] == []

    def test_checks_sorted(self):
        report = ReportBuilder("theta")
        report.add_check("theta.b", "b", True, 1, 1)
        report.add_check("theta.a", "a", False, Fraction(1, 2), 1)
        entry = report.add_skipped("theta.c", "c", "not applicable")
        assert [c["name"] for c in report["checks"]] == ["theta.a", "theta.b", "theta.c"]
        assert report["checks"][0]["lhs"] == "1/2"
        assert report["checks"][0]["exact_or_numeric"] == "exact"
        assert entry["status"] == SKIPPED
        assert entry["reason"] == "not applicable"
        assert report.counts() == {PASS: 1, FAIL: 1, SKIPPED: 1}
        assert report.failed() == ["theta.a"]

    def test_dumps(self):
        report = ReportBuilder("classgroup", seed=1)
        report.add_check("classgroup.orders", "h", True, 3, 3)
        with report.timed("classgroup"):
            pass
        body = json.loads(report.dumps())
        assert "timings" not in body
        assert body["summary"] == {PASS: 1, FAIL: 0, SKIPPED: 0}
        timed = json.loads(report.dumps(timings=True))
        assert "classgroup" in timed["timings"]

    def test_deterministic(self):
        def build():
            report = ReportBuilder("lambda", seed=3)
            report.add_section("lambda", {"general": "25/6"})
            report.add_check("lambda.b", "b", True, 1, 1)
            report.add_check("lambda.a", "a", True, 2, 2)
            with report.timed("lambda"):
                pass
            return report.dumps()

        assert build() == build()

    def test_merge(self):
        first = ReportBuilder("all")
        first.add_note("shared")
        second = ReportBuilder("theta")
        second.add_check("theta.x", "x", True)
        second.add_section("theta", {"weight": 1})
        second.add_note("shared")
        second.add_note("only in theta")
        with second.timed("theta"):
            pass
        first.merge(second)
        assert [c["name"] for c in first["checks"]] == ["theta.x"]
        assert first["sections"]["theta"] == {"weight": 1}
        assert first["notes"] == ["shared", "only in theta"]
        assert "theta" in first.timings
