"""Acceptance battery: ``check-all --seed 7`` run twice, one test per criterion."""

import json
import math

import pytest

from argvar.cli.generate import scenario_dict
from argvar.cli.main import main
from argvar.cli.report import dumps

SEED = 7
TWO_PI = 2 * math.pi


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k != "timing"}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


@pytest.fixture(scope="session")
def battery(tmp_path_factory):
    runs = []
    for name in ("first", "second"):
        out = tmp_path_factory.mktemp(name)
        code = main(["check-all", "--seed", str(SEED), "--out", str(out)])
        runs.append((code, out))
    (code, out), (code2, out2) = runs
    doc = json.loads((out / "check_all.json").read_text())
    return {"code": code, "codes": (code, code2), "dirs": (out, out2),
            "criteria": {c["id"]: c for c in doc["criteria"]}}


def records_of(c):
    recs = list(c["records"])
    for rep in c["reports"]:
        recs.extend(rep["records"])
    return recs


def verdict(log, cid, title, checks):
    failed = [msg for ok, msg in checks if not ok]
    line = f"[{'FAIL' if failed else 'PASS'}] criterion {cid}: {title}"
    if failed:
        line += " (" + "; ".join(failed) + ")"
    log.append(line)
    print(line)
    assert not failed, line


def common(c, n, names):
    recs = records_of(c)
    bad = [r for r in recs if r["status"] != "ok" or not r["holds"]]
    return recs, [
        (len(recs) == n, f"{len(recs)} records, expected {n}"),
        ({r["name"] for r in recs} == set(names), f"record names {sorted({r['name'] for r in recs})}"),
        (not bad, f"{len(bad)} violated or failed records"),
    ]


def test_criterion_01_argument_principle(battery, acceptance_log):
    c = battery["criteria"][1]
    recs, checks = common(c, 500, ["ArgumentPrinciple"])
    checks.append((all(r["lhs"] == r["rhs"] for r in recs), "count differs from constructed roots"))
    checks.append((all(r["inputs"]["degree"] <= 8 for r in recs), "degree above 8"))
    checks.append((c["timing"]["elapsed_s"] < 60.0 and c["timing"]["within_budget"],
                   f"runtime {c['timing']['elapsed_s']:.1f}s over 60s"))
    verdict(acceptance_log, 1, f"argument principle exact on {len(recs)} polynomials "
            f"in {c['timing']['elapsed_s']:.2f}s", checks)


def test_criterion_02_variation_exactness(battery, acceptance_log):
    c = battery["criteria"][2]
    recs, checks = common(c, 60, ["VariationMonomial", "VariationBlaschke"])
    mono = [r for r in recs if r["name"] == "VariationMonomial"]
    blas = [r for r in recs if r["name"] == "VariationBlaschke"]
    mono_err = max(abs(r["inputs"]["V"] - TWO_PI * r["inputs"]["n"]) for r in mono)
    blas_err = max(abs(r["inputs"]["V"] - r["inputs"]["V_dense"]) for r in blas)
    checks += [
        (sorted(r["inputs"]["n"] for r in mono) == list(range(1, 11)), "monomial degrees not 1..10"),
        (mono_err <= 1e-6, f"monomial error {mono_err:.3g}"),
        (len(blas) == 50 and blas_err <= 1e-4, f"dense-unwrap disagreement {blas_err:.3g}"),
    ]
    verdict(acceptance_log, 2, f"variation exact (monomial error {mono_err:.1e}, "
            f"dense oracle error {blas_err:.1e})", checks)


def test_criterion_03_growth_and_zeros(battery, acceptance_log):
    c = battery["criteria"][3]
    recs, checks = common(c, 1000, ["GrowthAndZeros"])
    med = c["stats"]["median_log10_slack"]
    checks.append((math.isfinite(med), "median log10 slack missing"))
    centers = [scenario_dict(SEED, "growth_zeros", i)["geometry"]["K"]["center"] for i in range(40)]
    checks.append((any(x == [0.0, 0.0] for x in centers) and any(x != [0.0, 0.0] for x in centers),
                   "suite lacks concentric or eccentric pairs"))
    verdict(acceptance_log, 3, f"growth-and-zeros holds on {len(recs)} scenarios, "
            f"median log10 slack {med:.2f}", checks)


def test_criterion_04_theorem1(battery, acceptance_log):
    c = battery["criteria"][4]
    recs, checks = common(c, 300, ["Theorem1"])
    checks += [
        (all(r["inputs"]["D_over_epsilon"] > 3 for r in recs), "D/eps <= 3 in a scenario"),
        (all(r["inputs"]["intermediate"]["holds"] for r in recs), "2pi form violated"),
        (all(r["inputs"]["intermediate"]["constant"] == TWO_PI for r in recs), "2pi form not recorded"),
    ]
    verdict(acceptance_log, 4, f"theorem 1 and its 2pi form hold on {len(recs)} scenarios", checks)


def test_criterion_05_theorem2(battery, acceptance_log):
    c = battery["criteria"][5]
    recs, checks = common(c, 50, ["Theorem2"])
    spans = []
    for i in range(50):
        g = scenario_dict(SEED, "theorem2", i)["geometry"]["U2"]["lifted_annulus"]
        spans.append(g["theta_end"] - g["theta_start"])
    checks += [
        (all(r["inputs"]["deck_invariant"] for r in recs), "pi-gap changed under a deck shift"),
        (all(r["inputs"]["deck_shift"] != 0 for r in recs), "deck shift not exercised"),
        (min(spans) >= 3 * math.pi, f"narrowest region spans {min(spans) / TWO_PI:.2f} sheets"),
    ]
    verdict(acceptance_log, 5, f"theorem 2 holds on {len(recs)} log-cover scenarios, "
            f"deck invariance on all, min span {min(spans) / TWO_PI:.2f} sheets", checks)


def test_criterion_06_lemma2(battery, acceptance_log):
    c = battery["criteria"][6]
    recs, checks = common(c, 200, ["Lemma2"])
    lhs_direct = all(r["lhs"] == r["inputs"]["B_F"] for r in recs)
    checks.append((lhs_direct, "lhs is not the directly computed index of f/p"))
    verdict(acceptance_log, 6, f"deflation bound holds on {len(recs)} scenarios", checks)


def test_criterion_07_lemma3_and_koebe(battery, acceptance_log):
    c = battery["criteria"][7]
    recs, checks = common(c, 400, ["Lemma3", "Koebe"])
    kinds = set()
    for i in range(200):
        kinds |= set(scenario_dict(SEED, "lemma3", i)["geometry"]["gamma"])
    checks.append((len(c["reports"]) == 200, f"{len(c['reports'])} scenarios, expected 200"))
    checks.append((kinds == {"circle", "polygon", "segments"}, f"curve kinds {sorted(kinds)}"))
    verdict(acceptance_log, 7, "curvature distortion and Koebe ratio hold on 200 scenarios", checks)


def test_criterion_08_proposition1(battery, acceptance_log):
    c = battery["criteria"][8]
    recs, checks = common(c, 400, ["Proposition1"])
    worst = 0.0
    for r in recs:
        rr, R = r["inputs"]["r"], r["inputs"]["R"]
        rho = 4 * math.atanh(rr / R)
        worst = max(worst, abs(r["lhs"] - rho) / rho)
        checks.append((abs(r["rhs"] - 2 * (2 * rr) / (R - rr)) <= 1e-12 * r["rhs"], "bound is not 2D/eps"))
    checks.append((worst <= 1e-12, f"hyperbolic diameter off by {worst:.3g}"))
    pairs = {(r["inputs"]["r"], r["inputs"]["R"]) for r in recs}
    checks.append((len(pairs) == 400, "grid is not 20x20"))
    verdict(acceptance_log, 8, f"hyperbolic diameter within 2D/eps on the 20x20 grid "
            f"(oracle error {worst:.1e})", checks)


def test_criterion_09_bernstein(battery, acceptance_log):
    c = battery["criteria"][9]
    recs, checks = common(c, 9, ["BernsteinExact"])
    worst = max(abs(r["inputs"]["B"] - r["inputs"]["d"] * math.log(r["inputs"]["R"] / r["inputs"]["r"]))
                / (r["inputs"]["d"] * math.log(r["inputs"]["R"] / r["inputs"]["r"])) for r in recs)
    checks.append((sorted({r["inputs"]["d"] for r in recs}) == [1, 3, 7], "degrees are not 1, 3, 7"))
    checks.append((worst <= 1e-5, f"relative error {worst:.3g}"))
    verdict(acceptance_log, 9, f"Bernstein index of z^d exact to {worst:.1e}", checks)


def test_criterion_10_determinism(battery, acceptance_log):
    a, b = (d / "check_all.json" for d in battery["dirs"])
    ja, jb = (dumps(strip_timing(json.loads(p.read_text()))) for p in (a, b))
    ca, cb = (d / "check_all.csv" for d in battery["dirs"])
    checks = [
        (ja == jb, "JSON reports differ outside timing fields"),
        (ca.read_bytes() == cb.read_bytes(), "CSV reports differ"),
        (battery["codes"] == (0, 0), f"exit codes {battery['codes']}"),
    ]
    verdict(acceptance_log, 10, "check-all --seed 7 twice gives identical reports modulo timing", checks)
