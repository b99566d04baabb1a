from .suites import SUITE_NAMES, CheckResult, PropertySuite, SuiteReport, run_suites

__all__ = ["SUITE_NAMES", "CheckResult", "PropertySuite", "SuiteReport", "run_suites"]
