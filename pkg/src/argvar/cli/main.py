"""``argvar`` command line: ``run``, ``suite`` and ``check-all``.

Exit codes: 0 when every check holds, 1 when some check is violated, 2 on
hypothesis or input errors, 3 when a numerical refinement did not converge.
The largest applicable code wins.  ``ARGVAR_MAX_REFINE`` overrides the
maximal number of refinement doublings (default 12).
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .. import __version__
from ..errors import ParseError, ValidationError
from .battery import run_battery
from .generate import RECIPES, generate_suite
from .report import dumps, emit_report
from .runner import run_scenario
from .scenario import parse_scenario


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="argvar", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"argvar {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", help="run the checks of one scenario file")
    run.add_argument("--scenario", required=True, type=Path)
    run.add_argument("--out", required=True, type=Path, help="output directory")
    run.add_argument("--format", choices=("json", "csv"), default="json")
    run.add_argument("--tol", type=float, default=None,
                     help="relative tolerance of the checks (overrides the scenario)")

    suite = sub.add_parser("suite", help="generate and run a random suite")
    suite.add_argument("--kind", required=True, choices=sorted(RECIPES))
    suite.add_argument("--seed", required=True, type=int)
    suite.add_argument("--n", required=True, type=int)
    suite.add_argument("--out", required=True, type=Path)
    suite.add_argument("--format", choices=("json", "csv"), default="json")

    ca = sub.add_parser("check-all", help="run the full acceptance battery")
    ca.add_argument("--seed", required=True, type=int)
    ca.add_argument("--out", required=True, type=Path)
    ca.add_argument("--scale", type=float, default=1.0,
                    help="fraction of the randomized battery sizes to run (default 1.0)")
    return p


def _summary(rep) -> str:
    parts = []
    for r in rep.records:
        state = r.status if r.status != "ok" else ("holds" if r.holds else "VIOLATED")
        parts.append(f"{r.name}={state}")
    return f"{rep.scenario}: " + ", ".join(parts)


def cmd_run(args) -> int:
    try:
        s = parse_scenario(args.scenario)
    except (ParseError, ValidationError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.tol is not None:
        s.tolerance = args.tol
    rep = run_scenario(s)
    emit_report(rep, args.format, args.out / f"{s.id}.{args.format}")
    print(_summary(rep))
    return rep.exit_code


def cmd_suite(args) -> int:
    if args.n < 1:
        print("error: --n must be at least 1", file=sys.stderr)
        return 2
    scenarios = generate_suite(args.seed, args.n, args.kind)
    args.out.mkdir(parents=True, exist_ok=True)
    stem = f"suite_{args.kind}_{args.seed}"
    (args.out / f"{stem}_scenarios.json").write_text(dumps([s.to_dict() for s in scenarios]))
    reports = [run_scenario(s) for s in scenarios]
    emit_report(reports, args.format, args.out / f"{stem}.{args.format}")
    bad = [rep for rep in reports if rep.exit_code]
    for rep in bad:
        print(_summary(rep))
    print(f"{args.kind}: {len(reports) - len(bad)}/{len(reports)} scenarios hold")
    return max((rep.exit_code for rep in reports), default=0)


def cmd_check_all(args) -> int:
    t0 = time.perf_counter()
    criteria = run_battery(args.seed, args.scale, progress=lambda c: print(c.summary(), flush=True))
    doc = {"tool": "argvar", "version": __version__, "seed": args.seed, "scale": args.scale,
           "criteria": [c.to_dict() for c in criteria],
           "timing": {"elapsed_s": time.perf_counter() - t0}}
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "check_all.json").write_text(dumps(doc))
    reports = [r for c in criteria for r in ([_Flat(c)] + c.reports)]
    emit_report(reports, "csv", args.out / "check_all.csv")
    code = max((c.exit_code for c in criteria), default=0)
    print(f"check-all seed={args.seed}: {sum(c.ok for c in criteria)}/{len(criteria)} criteria pass "
          f"({time.perf_counter() - t0:.1f}s)")
    return code


class _Flat:
    """Adapter exposing a criterion's direct records like a report."""

    def __init__(self, c):
        self.records = c.records

    def to_dict(self):
        return {"records": [r.to_record() for r in self.records]}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"run": cmd_run, "suite": cmd_suite, "check-all": cmd_check_all}[args.verb]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
