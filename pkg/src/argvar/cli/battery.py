"""The acceptance battery run by ``argvar check-all``.

Nine criteria, each a list of records plus summary statistics.  Records
that are not inequalities (exact counts, oracle agreement) reuse
:class:`~argvar.bounds.BoundCheck` with ``lhs`` the observed error or value
and ``rhs`` the allowed one.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from ..bounds import BoundCheck, bernstein_index, count_zeros, variation_of_argument
from ..geom import Curve, Disk, Polygon, Rectangle, gap, intrinsic_diameter, poincare_distance_disk
from ..holo import Coord, Mobius, Power, Product, from_roots
from .generate import Stream, generate_suite
from .report import log_ratio
from .runner import record_exit_code, run_scenario

SIZES = {"count": 500, "blaschke": 50, "growth_zeros": 1000, "theorem1": 300, "theorem2": 50,
         "lemma2": 200, "lemma3": 200}
COUNT_BUDGET_S = 60.0


@dataclass
class Criterion:
    id: int
    title: str
    passed: bool
    records: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    @property
    def all_records(self):
        return self.records + [r for rep in self.reports for r in rep.records]

    @property
    def violations(self) -> int:
        return sum(1 for r in self.all_records if not (r.status == "ok" and r.holds))

    @property
    def ok(self) -> bool:
        """``passed`` together with any runtime budget (kept out of the deterministic fields)."""
        return self.passed and self.timing.get("within_budget", True)

    @property
    def exit_code(self) -> int:
        code = max((record_exit_code(r) for r in self.all_records), default=0)
        return max(code, 0 if self.ok else 1)

    def summary(self) -> str:
        n = len(self.all_records)
        extra = [f"{k}={_fmt(v)}" for k, v in self.stats.items()]
        if "within_budget" in self.timing:
            extra.append(f"runtime={self.timing['elapsed_s']:.1f}s (budget {COUNT_BUDGET_S:.0f}s)")
        return (f"[{'PASS' if self.ok else 'FAIL'}] {self.id} {self.title}: "
                f"{n - self.violations}/{n} hold" + (f"; {', '.join(extra)}" if extra else ""))

    def to_dict(self) -> dict:
        return {"id": self.id, "title": self.title, "passed": self.passed,
                "n_records": len(self.all_records), "violations": self.violations,
                "stats": self.stats,
                "records": [r.to_record() for r in self.records],
                "reports": [rep.to_dict() for rep in self.reports],
                "timing": self.timing}


def _fmt(v):
    return f"{v:.4g}" if isinstance(v, float) else str(v)


def _exact(name, value, expected, inputs):
    return BoundCheck(name, float(value), float(expected), bool(value == expected), 0.0,
                      math.log(expected) if expected > 0 else -math.inf, inputs)


def _within(name, err, allowed, inputs):
    return BoundCheck(name, float(err), float(allowed), bool(err <= allowed), 0.0,
                      math.log(allowed), inputs)


def _n(kind, scale):
    return max(1, int(round(SIZES[kind] * scale)))


# -------------------------------------------------------------------------
# 1. argument principle


def _count_region(rng: Stream):
    kind = rng.integer(0, 2)
    c = rng.in_disk(0j, 1.0)
    size = rng.u(0.5, 2.0)
    if kind == 0:
        return Disk(c, size)
    if kind == 1:
        w, h = size * rng.u(0.5, 1.5), size * rng.u(0.5, 1.5)
        return Rectangle(c - (w + 1j * h) / 2, c + (w + 1j * h) / 2)
    n = rng.integer(3, 9)
    phase = rng.u(0.0, 2 * math.pi)
    verts = [c + size * rng.u(0.5, 1.0) * np.exp(1j * (phase + 2 * math.pi * (j + rng.u(-0.3, 0.3)) / n))
             for j in range(n)]
    return Polygon(tuple(complex(v) for v in verts))


def count_battery(seed, n):
    recs = []
    for i in range(n):
        rng = Stream(seed, "count", i)
        R = _count_region(rng)
        x0, x1, y0, y1 = R.bbox()
        pad = 0.5 * max(x1 - x0, y1 - y0)
        margin = 0.02 * R.scale
        degree = rng.integer(1, 8)
        roots = []
        while len(roots) < degree:
            if roots and rng.u() < 0.15:
                roots.append(roots[-1])  # repeated root
                continue
            z = complex(rng.u(x0 - pad, x1 + pad), rng.u(y0 - pad, y1 + pad))
            if float(R.distance_to_boundary(z)) >= margin:
                roots.append(z)
        expected = int(np.sum(R.contains(np.array(roots))))
        got = count_zeros(from_roots(roots), R)
        recs.append(_exact("ArgumentPrinciple", got, expected,
                           {"index": i, "degree": degree, "region": R.to_dict()}))
    return recs


# -------------------------------------------------------------------------
# 2. variation of argument


def _blaschke(rng: Stream):
    deg = rng.integer(1, 5)
    rho = rng.u(0.5, 0.95)
    c0 = rng.in_disk(0j, 0.05)
    zeros = []
    while len(zeros) < deg:
        a = rng.in_disk(0j, 0.9)
        if abs(abs(a - c0) - rho) >= 0.03:
            zeros.append(a)
    lam = rng.unit()
    return lam, zeros, c0, rho


def dense_unwrap_variation(values) -> float:
    """Naive oracle: ``sum |diff(unwrap(angle))|`` over dense samples."""
    return float(np.abs(np.diff(np.unwrap(np.angle(values)))).sum())


def variation_battery(seed, n):
    recs = []
    for k in range(1, 11):
        v = variation_of_argument(Power(Coord(), k), Curve.circle(0, 1)).value
        recs.append(_within("VariationMonomial", abs(v - 2 * math.pi * k), 1e-6, {"n": k, "V": v}))
    for i in range(n):
        rng = Stream(seed, "blaschke", i)
        lam, zeros, c0, rho = _blaschke(rng)
        f = Product(tuple([Mobius(Coord(), lam, -lam * zeros[0], -np.conj(zeros[0]), 1.0)]
                          + [Mobius(Coord(), 1.0, -a, -np.conj(a), 1.0) for a in zeros[1:]]))
        v = variation_of_argument(f, Curve.circle(c0, rho)).value
        z = c0 + rho * np.exp(2j * np.pi * np.linspace(0.0, 1.0, 100_001))
        vals = lam * np.prod([(z - a) / (1 - np.conj(a) * z) for a in zeros], axis=0)
        ref = dense_unwrap_variation(vals)
        recs.append(_within("VariationBlaschke", abs(v - ref), 1e-4,
                            {"index": i, "degree": len(zeros), "rho": rho, "V": v, "V_dense": ref}))
    return recs


# -------------------------------------------------------------------------
# 8. hyperbolic diameter against 2D/eps; 9. exact Bernstein indices


def poincare_grid(m=20):
    recs = []
    for i in range(m):
        R = 1.0 + 0.25 * i
        for j in range(m):
            r = R * (j + 1) / (m + 1)
            K, U = Disk(0, r), Disk(0, R)
            rho = float(poincare_distance_disk(-r / R, r / R))
            D = intrinsic_diameter(K).value
            eps = gap(K, U)
            rhs = 2.0 * D / eps
            recs.append(BoundCheck("Proposition1", rho, rhs, BoundCheck.judge(rho, rhs, 0.0), 0.0,
                                   math.log(rhs), {"r": r, "R": R, "D": D, "epsilon": eps,
                                                   "oracle_rho": 4.0 * math.atanh(r / R)}))
    return recs


def bernstein_exact():
    recs = []
    for d in (1, 3, 7):
        for r, R in ((0.5, 1.0), (0.3, 2.0), (1.0, 1.5)):
            B = bernstein_index(Power(Coord(), d), Disk(0, r), Disk(0, R)).B
            exact = d * math.log(R / r)
            recs.append(_within("BernsteinExact", abs(B - exact) / exact, 1e-5,
                                {"d": d, "r": r, "R": R, "B": B, "exact": exact}))
    return recs


# -------------------------------------------------------------------------


def _suite(seed, kind, n):
    return [run_scenario(s) for s in generate_suite(seed, n, kind)]


def _median_log_slack(records):
    ys = [y for r in records if (y := log_ratio(r.to_record())) is not None]
    return statistics.median(ys) if ys else None


def _timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


def run_battery(seed: int, scale: float = 1.0, progress=None) -> list[Criterion]:
    """Run criteria 1 to 9; ``scale`` shrinks the randomized batteries (1.0 is the full size)."""
    out = []

    def done(c):
        out.append(c)
        if progress:
            progress(c)

    recs, dt = _timed(count_battery, seed, _n("count", scale))
    exact = all(r.holds for r in recs)
    done(Criterion(1, "argument principle exactness", exact, recs,
                   stats={"n": len(recs), "total_roots_inside": int(sum(r.rhs for r in recs))},
                   timing={"elapsed_s": dt, "within_budget": dt < COUNT_BUDGET_S}))

    recs, dt = _timed(variation_battery, seed, _n("blaschke", scale))
    blaschke = [r for r in recs if r.name == "VariationBlaschke"]
    done(Criterion(2, "variation exactness", all(r.holds for r in recs), recs,
                   stats={"max_monomial_error": max(r.lhs for r in recs if r.name == "VariationMonomial"),
                          "max_oracle_error": max(r.lhs for r in blaschke)},
                   timing={"elapsed_s": dt}))

    reps, dt = _timed(_suite, seed, "growth_zeros", _n("growth_zeros", scale))
    c = Criterion(3, "growth and zeros", False, reports=reps, timing={"elapsed_s": dt})
    c.passed = c.violations == 0
    c.stats = {"median_log10_slack": _median_log_slack(c.all_records),
               "zero_free_scenarios": sum(1 for r in c.all_records if r.lhs == 0)}
    done(c)

    reps, dt = _timed(_suite, seed, "theorem1", _n("theorem1", scale))
    c = Criterion(4, "theorem 1 with intermediate 2pi form", False, reports=reps, timing={"elapsed_s": dt})
    inter = [r.inputs.get("intermediate", {}).get("holds", False) for r in c.all_records]
    c.passed = c.violations == 0 and all(inter)
    c.stats = {"median_log10_slack": _median_log_slack(c.all_records),
               "intermediate_form_holds": sum(inter),
               "min_D_over_epsilon": min((r.inputs.get("D_over_epsilon", math.inf) for r in c.all_records))}
    done(c)

    reps, dt = _timed(_suite, seed, "theorem2", _n("theorem2", scale))
    c = Criterion(5, "theorem 2 on the log cover", False, reports=reps, timing={"elapsed_s": dt})
    deck = [bool(r.inputs.get("deck_invariant", False)) for r in c.all_records]
    c.passed = c.violations == 0 and all(deck)
    c.stats = {"median_log10_slack": _median_log_slack(c.all_records), "deck_invariant": sum(deck)}
    done(c)

    reps, dt = _timed(_suite, seed, "lemma2", _n("lemma2", scale))
    c = Criterion(6, "deflation bound", False, reports=reps, timing={"elapsed_s": dt})
    c.passed = c.violations == 0
    c.stats = {"min_slack": min(r.slack for r in c.all_records)}
    done(c)

    reps, dt = _timed(_suite, seed, "lemma3", _n("lemma3", scale))
    c = Criterion(7, "curvature distortion and Koebe ratio", False, reports=reps, timing={"elapsed_s": dt})
    c.passed = c.violations == 0
    c.stats = {"min_slack_lemma3": min(r.slack for r in c.all_records if r.name == "Lemma3"),
               "min_slack_koebe": min(r.slack for r in c.all_records if r.name == "Koebe")}
    done(c)

    recs, dt = _timed(poincare_grid)
    done(Criterion(8, "hyperbolic diameter versus 2D/eps", all(r.holds for r in recs), recs,
                   stats={"max_oracle_error": max(abs(r.lhs - r.inputs["oracle_rho"]) for r in recs)},
                   timing={"elapsed_s": dt}))

    recs, dt = _timed(bernstein_exact)
    done(Criterion(9, "exact Bernstein indices", all(r.holds for r in recs), recs,
                   stats={"max_relative_error": max(r.lhs for r in recs)}, timing={"elapsed_s": dt}))
    return out
