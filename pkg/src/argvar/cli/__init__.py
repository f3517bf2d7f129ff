"""Scenario files, random suites, reports and the ``argvar`` command."""

from .generate import Stream, generate_suite
from .report import emit_report, read_csv
from .runner import Report, run_scenario
from .scenario import CHECKS, Scenario, parse_scenario, scenario_from_dict

__all__ = ["CHECKS", "Report", "Scenario", "Stream", "emit_report", "generate_suite",
           "parse_scenario", "read_csv", "run_scenario", "scenario_from_dict"]
