import copy
import json
import math

import numpy as np
import pytest

from argvar.bounds import BoundCheck
from argvar.cli.main import main
from argvar.cli.generate import KIND_CODES, RECIPES, Stream, generate_suite, scenario_dict
from argvar.cli.report import CSV_COLUMNS, emit_report, read_csv
from argvar.cli.runner import Report, record_exit_code, run_scenario
from argvar.cli.scenario import parse_scenario, scenario_from_dict
from argvar.errors import ParseError, ValidationError

Z5 = {"op": "pow", "base": {"op": "z"}, "n": 5}


def disk(c, r):
    return {"shape": "disk", "center": [c, 0.0], "radius": r}


MONOMIAL = {
    "id": "monomial",
    "function": Z5,
    "geometry": {"K": disk(0, 0.5), "U": disk(0, 1.0)},
    "checks": ["growth_zeros"],
}

NESTED = {
    "id": "nested",
    "function": Z5,
    "geometry": {
        "K": disk(0, 0.5), "U": disk(0, 1.0), "U2": disk(0, 0.6), "U1": disk(0, 0.7),
        "gamma": {"circle": {"center": [0, 0], "radius": 0.5}},
        "p_roots": [[0, 0]] * 5,
        "p": {"op": "pow", "base": {"op": "z"}, "n": 2},
        "conformal": {"region": disk(0, 1.0), "basepoint": [0.1, 0.0]},
    },
    "checks": ["growth_zeros", "theorem1", "lemma1", "lemma2", "lemma3", "koebe", "eq14"],
}


def write(tmp_path, d, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d, indent=1))
    return p


# -------------------------------------------------------------------------
# independent Philox4x64-10


MASK = (1 << 64) - 1
MUL = (0xD2E7470EE14C6C93, 0xCA5A826395121157)
WEYL = (0x9E3779B97F4A7C15, 0xBB67AE8584CAA73B)


def philox_block(ctr, key):
    c, k = list(ctr), list(key)
    for rnd in range(10):
        if rnd:
            k = [(k[0] + WEYL[0]) & MASK, (k[1] + WEYL[1]) & MASK]
        p0, p1 = MUL[0] * c[0], MUL[1] * c[2]
        c = [(p1 >> 64) ^ c[1] ^ k[0], p1 & MASK, (p0 >> 64) ^ c[3] ^ k[1], p0 & MASK]
    return c


def reference_uniforms(seed, kind, index, n):
    key = (seed, (KIND_CODES[kind] << 32) | index)
    words = []
    ctr = 0
    while len(words) < n:
        ctr += 1
        words += philox_block((ctr, 0, 0, 0), key)
    return [(w >> 11) * 2.0 ** -53 for w in words[:n]]


class TestGenerator:
    @pytest.mark.parametrize("seed, kind, index", [(0, "theorem1", 0), (7, "growth_zeros", 3),
                                                   (2 ** 63 + 5, "blaschke", 2 ** 32 - 1)])
    def test_stream_matches_reference(self, seed, kind, index):
        s = Stream(seed, kind, index)
        assert [s.u() for _ in range(11)] == reference_uniforms(seed, kind, index, 11)

    def test_recipe_draw_order(self):
        # growth_zeros: R = 1 + 2u0, concentric iff u1 < 0.5, r = R (0.2 + 0.5 u2)
        for i in range(5):
            u = reference_uniforms(7, "growth_zeros", i, 3)
            d = scenario_dict(7, "growth_zeros", i)
            R = 1 + 2 * u[0]
            assert d["geometry"]["U"]["radius"] == R
            assert d["geometry"]["K"]["radius"] == pytest.approx(R * (0.2 + 0.5 * u[2]), rel=1e-15)
            assert (d["geometry"]["K"]["center"] == [0.0, 0.0]) == (u[1] < 0.5)

    def test_deterministic_listed(self):
        a = [s.dumps() for s in generate_suite(1, 2, "growth_zeros")]
        assert a == [s.dumps() for s in generate_suite(1, 2, "growth_zeros")]

    def test_deterministic(self):
        a = [s.dumps() for s in generate_suite(11, 4, "theorem1")]
        b = [s.dumps() for s in generate_suite(11, 4, "theorem1")]
        assert a == b
        assert a != [s.dumps() for s in generate_suite(12, 4, "theorem1")]

    @pytest.mark.parametrize("kind", sorted(RECIPES))
    def test_every_kind_validates(self, kind):
        for s in generate_suite(5, 2, kind):
            assert s.id.startswith(kind)
            assert s.checks

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            generate_suite(1, 0, "theorem1")
        with pytest.raises(ValueError):
            generate_suite(1, 1, "nope")
        with pytest.raises(ValueError):
            Stream(-1, "theorem1", 0)


class TestScenario:
    def test_minimal(self, tmp_path):
        s = parse_scenario(write(tmp_path, MONOMIAL))
        assert s.id == "monomial" and s.checks == ("growth_zeros",)
        assert not s.surface

    def test_theorem2_needs_cover(self):
        d = copy.deepcopy(NESTED)
        d["checks"] = ["theorem2"]
        with pytest.raises(ValidationError):
            scenario_from_dict(d)

    def test_not_contained(self):
        d = copy.deepcopy(MONOMIAL)
        d["geometry"]["K"] = disk(0.6, 0.5)
        with pytest.raises(ValidationError):
            scenario_from_dict(d)

    def test_unknown_check(self):
        d = copy.deepcopy(MONOMIAL)
        d["checks"] = ["theorem9"]
        with pytest.raises(ValidationError):
            scenario_from_dict(d)

    def test_missing_field(self):
        d = copy.deepcopy(MONOMIAL)
        del d["geometry"]["U"]
        with pytest.raises((ParseError, ValidationError)):
            scenario_from_dict(d)

    def test_malformed_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{\n "id": "x",\n "checks": [\n}\n')
        with pytest.raises(ParseError, match=r"bad\.json:4:"):
            parse_scenario(p)

    def test_bad_function(self):
        d = copy.deepcopy(MONOMIAL)
        d["function"] = {"op": "sinh"}
        with pytest.raises(ParseError):
            scenario_from_dict(d)


class TestRunner:
    def test_monomial(self):
        rep = run_scenario(scenario_from_dict(MONOMIAL))
        (rec,) = rep.records
        assert rec.name == "GrowthAndZeros" and rec.holds and rec.lhs == 5
        assert rep.exit_code == 0
        assert rep.geometry["epsilon"] == pytest.approx(0.5)

    def test_all_planar_checks(self):
        rep = run_scenario(scenario_from_dict(NESTED))
        names = [r.name for r in rep.records]
        assert names == ["GrowthAndZeros", "Theorem1", "Lemma1", "Lemma2", "Lemma3", "Koebe", "Eq14"]
        by = {r.name: r for r in rep.records}
        # z^5 has zeros in U1, so the nowhere-zero hypothesis fails and is reported
        assert by["Lemma1"].status == "hypothesis_error"
        assert by["Lemma1"].inputs["failed_hypothesis"] == "F nowhere zero"
        assert all(r.holds for n, r in by.items() if n != "Lemma1")
        assert by["Theorem1"].lhs == pytest.approx(10 * math.pi)
        assert by["Lemma2"].lhs == pytest.approx(0.0, abs=1e-9)
        assert rep.exit_code == 2
        json.dumps(rep.to_dict(), allow_nan=False)

    def test_six_checks_hold(self):
        d = copy.deepcopy(NESTED)
        d["checks"].remove("lemma1")
        rep = run_scenario(scenario_from_dict(d))
        assert len(rep.records) == 6 and all(r.holds for r in rep.records)
        assert rep.exit_code == 0

    def test_theorem1_gate_becomes_record(self, monkeypatch):
        import argvar.bounds.checks as C
        real = C._nested_geometry

        def squeezed(*args, **kw):
            geo = real(*args, **kw)
            geo["D"] = 2.0 * geo["epsilon"]
            return geo

        monkeypatch.setattr(C, "_nested_geometry", squeezed)
        d = copy.deepcopy(NESTED)
        d["checks"] = ["theorem1"]
        (rec,) = run_scenario(scenario_from_dict(d)).records
        assert rec.status == "hypothesis_error"
        assert rec.inputs["failed_hypothesis"] == "D/eps>3"

    def test_record_exit_codes(self):
        ok = BoundCheck.evaluate("A", 1.0, 1.0)
        bad = BoundCheck.evaluate("B", 10.0, 0.0)
        nc = BoundCheck("C", math.nan, math.nan, False, status="nonconvergence")
        assert [record_exit_code(r) for r in (ok, bad, nc)] == [0, 1, 3]
        assert Report("x", [ok, bad]).exit_code == 1
        assert Report("x", [ok, bad, nc]).exit_code == 3
        assert Report("x", []).exit_code == 0


class TestReport:
    def test_csv_header_only(self, tmp_path):
        out = tmp_path / "r.csv"
        emit_report([], "csv", out)
        assert out.read_text().strip() == ",".join(CSV_COLUMNS)
        assert read_csv(out) == []

    def test_csv_single_row_and_plot_files(self, tmp_path):
        rep = run_scenario(scenario_from_dict(MONOMIAL))
        paths = emit_report(rep, "csv", tmp_path / "r.csv")
        rows = read_csv(paths[0])
        assert len(rows) == 1
        assert rows[0]["name"] == "GrowthAndZeros" and rows[0]["holds"] is True
        assert rows[0]["lhs"] == 5.0 and rows[0]["kappa"] is None
        assert paths[1].name == "r_slack.csv" and paths[2].read_text().startswith("<svg")

    def test_json_csv_json(self, tmp_path):
        rep = run_scenario(scenario_from_dict(NESTED))
        emit_report([rep], "json", tmp_path / "r.json")
        loaded = json.loads((tmp_path / "r.json").read_text())
        emit_report(loaded, "csv", tmp_path / "r.csv")
        rows = read_csv(tmp_path / "r.csv")
        recs = loaded[0]["records"]
        assert len(rows) == len(recs)
        for row, rec in zip(rows, recs):
            assert row == {c: rec[c] for c in CSV_COLUMNS}


class TestMain:
    def test_run(self, tmp_path, capsys):
        code = main(["run", "--scenario", str(write(tmp_path, MONOMIAL)), "--out", str(tmp_path / "o")])
        assert code == 0
        rep = json.loads((tmp_path / "o" / "monomial.json").read_text())
        assert rep["records"][0]["holds"]
        assert "GrowthAndZeros=holds" in capsys.readouterr().out

    def test_run_hypothesis_error_and_tol(self, tmp_path):
        p = write(tmp_path, NESTED)
        assert main(["run", "--scenario", str(p), "--out", str(tmp_path), "--format", "csv",
                     "--tol", "1e-3"]) == 2
        assert len(read_csv(tmp_path / "nested.csv")) == 7

    def test_run_bad_input(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("[")
        assert main(["run", "--scenario", str(p), "--out", str(tmp_path)]) == 2

    def test_usage_error(self):
        with pytest.raises(SystemExit) as info:
            main(["run"])
        assert info.value.code == 2

    def test_suite(self, tmp_path):
        assert main(["suite", "--kind", "growth_zeros", "--seed", "3", "--n", "4", "--out", str(tmp_path)]) == 0
        scen = json.loads((tmp_path / "suite_growth_zeros_3_scenarios.json").read_text())
        reps = json.loads((tmp_path / "suite_growth_zeros_3.json").read_text())
        assert len(scen) == len(reps) == 4
        assert main(["suite", "--kind", "growth_zeros", "--seed", "3", "--n", "0", "--out", str(tmp_path)]) == 2

    def test_check_all_small(self, tmp_path, capsys):
        assert main(["check-all", "--seed", "1", "--out", str(tmp_path), "--scale", "0.02"]) == 0
        doc = json.loads((tmp_path / "check_all.json").read_text())
        assert [c["id"] for c in doc["criteria"]] == list(range(1, 10))
        out = capsys.readouterr().out.splitlines()
        assert sum(line.startswith("[PASS]") for line in out) == 9
        assert (tmp_path / "check_all.csv").exists()
