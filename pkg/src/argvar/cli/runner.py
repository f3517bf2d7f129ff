"""Run the checks of a scenario and collect them into a report."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from .. import __version__
from ..bounds import checks as C
from ..errors import ArgvarError, HypothesisError, NonconvergenceError, NonIntegerWindingError
from .scenario import Scenario

RECORD_NAMES = {
    "growth_zeros": "GrowthAndZeros", "theorem1": "Theorem1", "theorem2": "Theorem2",
    "lemma1": "Lemma1", "lemma2": "Lemma2", "lemma3": "Lemma3", "koebe": "Koebe", "eq14": "Eq14",
}
GEOMETRY_KEYS = ("epsilon", "D", "gamma_length", "kappa")


@dataclass
class Report:
    """Outcome of one scenario: one record per requested check, in request order."""

    scenario: str
    records: list
    geometry: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    version: str = __version__
    seed: int | None = None

    @property
    def exit_code(self) -> int:
        return max((record_exit_code(r) for r in self.records), default=0)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seed": self.seed,
            "version": self.version,
            "exit_code": self.exit_code,
            "geometry": self.geometry,
            "records": [r.to_record() for r in self.records],
            "timing": self.timing,
        }


def record_exit_code(r: C.BoundCheck) -> int:
    """0 holds, 1 violated, 2 hypothesis or input error, 3 nonconvergence."""
    if r.status == "nonconvergence":
        return 3
    if r.status != "ok":
        return 2
    return 0 if r.holds else 1


def _dispatch(check: str, s: Scenario) -> C.BoundCheck:
    g, f, grid = s.geometry, s.function, s.grid
    if check == "growth_zeros":
        return C.check_growth_and_zeros(f, g["K"], g["U"], grid)
    if check == "theorem1":
        return C.check_theorem1(f, g["gamma"], g["U2"], g["U1"], g["U"], grid)
    if check == "theorem2":
        return C.check_theorem2(f, g["gamma"], g["U2"], g["U1"], g["U"], s.cover, grid)
    if check == "lemma1":
        return C.check_lemma1(f, g["gamma"], g["U2"], g["U1"], grid)
    if check == "lemma2":
        return C.check_lemma2(f, g["p_roots"], g["U2"], g["U1"], g["U"], grid)
    if check == "lemma3":
        return C.check_lemma3(g["conformal"], g["gamma"], g.get("epsilon"))
    if check == "koebe":
        return C.koebe_ratio_check(g["conformal"], g["gamma"], g.get("epsilon"))
    if check == "eq14":
        return C.check_submultiplicativity(f, g["p"], g["gamma"])
    raise ValueError(f"unknown check {check!r}")


def run_check(check: str, s: Scenario) -> C.BoundCheck:
    """Run one check; failures of hypotheses and numerical breakdowns become records."""
    name = RECORD_NAMES[check]
    try:
        rec = _dispatch(check, s)
    except HypothesisError as exc:
        return C.BoundCheck.failure(name, exc, "hypothesis_error", {"scenario": s.id})
    except (NonconvergenceError, NonIntegerWindingError) as exc:
        return C.BoundCheck.failure(name, exc, "nonconvergence", {"scenario": s.id})
    except ArgvarError as exc:
        return C.BoundCheck.failure(name, exc, "error", {"scenario": s.id})
    return rec.with_rel_tol(s.tolerance)


def run_scenario(s: Scenario) -> Report:
    """Execute every requested check of ``s`` in declaration order."""
    t0 = time.perf_counter()
    records, per_check = [], {}
    for check in s.checks:
        t = time.perf_counter()
        records.append(run_check(check, s))
        per_check[check] = time.perf_counter() - t
    geometry = {}
    for key in GEOMETRY_KEYS:
        for r in records:
            v = r.inputs.get(key)
            if v is not None and math.isfinite(v):
                geometry[key] = float(v)
                break
    timing = {"elapsed_s": time.perf_counter() - t0, "checks_s": per_check}
    return Report(s.id, records, geometry, timing, seed=s.seed)

