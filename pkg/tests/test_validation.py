import pytest

from perqwalk.errors import ConfigError
from perqwalk.validation.suites import (
    SUITE_NAMES,
    CheckResult,
    CptpSuite,
    EigenstateSuite,
    StationaritySuite,
    SuiteReport,
    resolve_suites,
)


class ShortCptp(CptpSuite):
    lattices = ("3x3:open,periodic",)
    steps = 50


class SmallEigenstates(EigenstateSuite):
    sizes = ((3, 3),)
    boundaries = ("periodic,periodic", "open,periodic")


def test_resolve_suites():
    assert resolve_suites("oracle") == ["oracle"]
    assert resolve_suites("all") == [name for name in SUITE_NAMES if name != "all"]
    with pytest.raises(ConfigError, match="Known suites"):
        resolve_suites("speed")


def test_cptp_suite_passes_on_short_runs():
    checks = ShortCptp().run()
    # 4 coins x 3 invariants
    assert len(checks) == 12
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_eigenstate_suite_compares_spans_on_cylinders():
    checks = SmallEigenstates().run()
    cylinder = [c for c in checks if "open,periodic" in c.instance]
    assert {c.invariant for c in cylinder} == {"U_K phi = alpha phi", "count", "span"}
    hadamard = [c for c in cylinder if "hadamard2d" in c.instance]
    assert {c.invariant for c in hadamard} == {"U_K phi = alpha phi", "count", "span"}
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_stationarity_suite():
    assert all(c.passed for c in StationaritySuite().run())


def test_report_collects_failures():
    report = SuiteReport(suites=["x"])
    report.checks.append(CheckResult("x", "a", "i", 0.0, 1e-12, True))
    assert report.passed
    report.checks.append(CheckResult("x", "b", "i", 1.0, 1e-12, False))
    assert not report.passed
    assert [c.invariant for c in report.failures] == ["b"]
