"""
Utilities and helpers
"""

import json
import logging
import time
from contextlib import contextmanager

import mpmath
import sympy

from starkrankin import __version__
from starkrankin.qexp import render_coefficient

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

EXACT = "exact"
NUMERIC = "numeric"


def status_of(passed):
    """Map True/False/None to pass/fail/skipped"""
    if passed is None:
        return SKIPPED
    return PASS if passed else FAIL


def render(value):
    """Render an exact value as a JSON friendly string or structure"""
    if value is None:
        return None
    if isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    return render_coefficient(value)


class ReportBuilder(dict):

    """
    A convenience class for managing dictionaries that represent reports.
    It provides shorthands for adding checks, result sections and the
    global block (seed, versions, scenario echo). Checks are kept sorted
    by name so the serialised report only depends on its contents.
    Elapsed times live outside the dictionary and are only serialised
    when asked for.
    """

    def __init__(self, command, seed=None, **kwargs):
        super().__init__(**kwargs)
        self["command"] = command
        self["seed"] = seed
        self["versions"] = versions()
        self["checks"] = []
        self.timings = {}

    def add_check(self, name, anchor, passed, lhs=None, rhs=None, kind=EXACT, **extra):
        """
        Adds a check entry.

        : param str name: unique check name
        : param str anchor: the formula or statement being checked
        : param passed: True, False, or None for a skipped check
        : param lhs, rhs: the two compared sides, rendered exactly
        : param str kind: "exact" or "numeric"
        """

        entry = {
            "name": name,
            "anchor": anchor,
            "status": status_of(passed),
            "lhs": render(lhs),
            "rhs": render(rhs),
            "exact_or_numeric": kind,
        }
        entry.update(extra)
        self["checks"].append(entry)
        self["checks"].sort(key=lambda check: check["name"])
        if passed is False:
            logger.error(f"check {name} failed: {entry['lhs']} != {entry['rhs']}")
        return entry

    def add_skipped(self, name, anchor, reason):
        return self.add_check(name, anchor, None, reason=reason)

    def add_section(self, name, body):
        """
        Adds a result section. Sections are merged by name.
        """

        if "sections" not in self:
            self["sections"] = {}
        self["sections"][name] = body

    def add_scenario_echo(self, scenario):
        self["scenario"] = scenario.to_json()

    def add_note(self, note):
        self.setdefault("notes", []).append(note)

    def merge(self, other):
        """Fold the checks, sections, notes and timings of another report into this one"""
        for check in other["checks"]:
            self["checks"].append(check)
        self["checks"].sort(key=lambda check: check["name"])
        for name, body in other.get("sections", {}).items():
            self.add_section(name, body)
        for note in other.get("notes", []):
            if note not in self.get("notes", []):
                self.add_note(note)
        self.timings.update(other.timings)

    @contextmanager
    def timed(self, name):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = time.perf_counter() - start

    def counts(self):
        statuses = [check["status"] for check in self["checks"]]
        return {status: statuses.count(status) for status in (PASS, FAIL, SKIPPED)}

    def failed(self):
        return [check["name"] for check in self["checks"] if check["status"] == FAIL]

    def dumps(self, timings=False):
        """
        Serialise the report. The timing block is appended only when asked
        for and is the only part that changes between identical runs.
        """

        body = dict(self)
        body["summary"] = self.counts()
        if timings:
            body["timings"] = {name: round(seconds, 6) for name, seconds in sorted(self.timings.items())}
        return json.dumps(body, indent=2, sort_keys=True)


def versions():
    return {
        "starkrankin": __version__,
        "sympy": sympy.__version__,
        "mpmath": mpmath.__version__,
    }
