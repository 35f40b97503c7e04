"""Scenario configuration, verification suites, reports and the ``ortho`` CLI."""
from .config import ScenarioConfig, resolve_config
from .report import Check, ReportDocument, emit_report
from .suites import SUITES, run_suite

__all__ = ["ScenarioConfig", "resolve_config", "Check", "ReportDocument", "emit_report",
           "SUITES", "run_suite"]
