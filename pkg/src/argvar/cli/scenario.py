"""Scenario files: a function, its geometry and the checks to run on it.

A scenario is a JSON object::

    {
      "id": "monomial",
      "function": {"op": "pow", "base": {"op": "z"}, "n": 5},
      "cover": {"kind": "log", "branch_point": [0, 0]},          (optional)
      "geometry": {"K": ..., "U": ..., "U2": ..., "U1": ..., "gamma": ...,
                   "p_roots": [...], "p": {...},
                   "conformal": {"region": ..., "basepoint": [re, im]},
                   "epsilon": 0.2},
      "checks": ["growth_zeros", "theorem1"],
      "tolerance": 1e-6,
      "grid": {"h": null, "connectivity": 48, "levels": 2},
      "seed": 7
    }

Complex numbers are ``[re, im]`` pairs.  ``U2`` and ``U1`` are the inner
and middle sets of a nested triple ``U2 < U1 < U``.  With a cover present,
regions are surface regions (``pieces``, ``lifted_annulus`` or a plain
shape on sheet 0) and ``gamma`` is a surface curve.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..cover import CoverSpec, SurfaceCurve, SurfaceRegion, pi_gap
from ..errors import ArgvarError, ContainmentError, ParseError, ValidationError
from ..geom.conformal import ConformalMapEntry, conformal_to_disk
from ..geom.curves import Curve
from ..geom.metric import GridParams, gap, gap_curve
from ..geom.regions import region_from_dict
from ..holo import HoloExpr, expr_from_dict, parse_complex

CHECKS = ("growth_zeros", "theorem1", "theorem2", "lemma1", "lemma2", "lemma3", "koebe", "eq14")

# geometry fields each check needs
REQUIRED = {
    "growth_zeros": ("function", "K", "U"),
    "theorem1": ("function", "gamma", "U2", "U1", "U"),
    "theorem2": ("function", "gamma", "U2", "U1", "U"),
    "lemma1": ("function", "gamma", "U2", "U1"),
    "lemma2": ("function", "p_roots", "U2", "U1", "U"),
    "lemma3": ("conformal", "gamma"),
    "koebe": ("conformal", "gamma"),
    "eq14": ("function", "p", "gamma"),
}
PLANAR_ONLY = ("theorem1", "lemma1", "lemma2", "lemma3", "koebe")


@dataclass
class Scenario:
    """A parsed and validated scenario; ``raw`` is the canonical JSON form."""

    id: str
    checks: tuple
    function: HoloExpr | None = None
    cover: CoverSpec | None = None
    geometry: dict = field(default_factory=dict)
    tolerance: float = 1e-6
    grid: GridParams = field(default_factory=GridParams)
    seed: int | None = None
    raw: dict = field(default_factory=dict)

    @property
    def surface(self) -> bool:
        return self.cover is not None and not self.cover.trivial

    def to_dict(self) -> dict:
        return self.raw

    def dumps(self) -> str:
        return json.dumps(self.raw, sort_keys=True, indent=1)


def _field(name, fn, value):
    try:
        return fn(value)
    except ParseError as exc:
        raise ParseError(f"field {name!r}: {exc}") from None
    except ArgvarError as exc:
        raise ValidationError(f"field {name!r}: {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"field {name!r}: {type(exc).__name__}: {exc}") from None


def _parse_geometry(g: dict, cover: CoverSpec | None) -> dict:
    surface = cover is not None and not cover.trivial
    out = {}
    for key in ("K", "U", "U2", "U1"):
        if key in g:
            if surface:
                out[key] = _field(f"geometry.{key}", lambda d: SurfaceRegion.from_dict(d, cover), g[key])
            else:
                out[key] = _field(f"geometry.{key}", region_from_dict, g[key])
    if "gamma" in g:
        if surface:
            out["gamma"] = _field("geometry.gamma", lambda d: SurfaceCurve.from_dict(d, cover), g["gamma"])
        else:
            out["gamma"] = _field("geometry.gamma", Curve.from_dict, g["gamma"])
    if "p_roots" in g:
        out["p_roots"] = _field("geometry.p_roots", lambda v: [parse_complex(r) for r in v], g["p_roots"])
    if "p" in g:
        out["p"] = _field("geometry.p", expr_from_dict, g["p"])
    if "conformal" in g:
        c = g["conformal"]

        def build(c):
            return conformal_to_disk(region_from_dict(c["region"]), parse_complex(c.get("basepoint", 0.0)))

        out["conformal"] = _field("geometry.conformal", build, c)
    if g.get("epsilon") is not None:
        out["epsilon"] = _field("geometry.epsilon", float, g["epsilon"])
        if not out["epsilon"] > 0:
            raise ValidationError("geometry.epsilon must be positive")
    unknown = set(g) - {"K", "U", "U2", "U1", "gamma", "p_roots", "p", "conformal", "epsilon"}
    if unknown:
        raise ParseError(f"unknown geometry fields {sorted(unknown)}")
    return out


def _contained(inner, outer, what, surface):
    try:
        value = pi_gap(inner, outer) if surface else gap(inner, outer)
    except ContainmentError as exc:
        raise ValidationError(f"{what}: {exc}") from None
    if not value > 0:
        raise ValidationError(f"{what}: sets touch (gap {value:.3g})")


def _validate(s: Scenario):
    g = s.geometry
    for check in s.checks:
        missing = [k for k in REQUIRED[check] if (s.function if k == "function" else g.get(k)) is None]
        if missing:
            raise ValidationError(f"check {check!r} needs {', '.join(missing)}")
        if check == "theorem2" and not s.surface:
            raise ValidationError("check 'theorem2' requires a nontrivial cover")
        if check in PLANAR_ONLY and s.surface:
            raise ValidationError(f"check {check!r} works on planar geometry only")
    checked = set()

    def need(a, b):
        if (a, b) not in checked:
            checked.add((a, b))
            _contained(g[a], g[b], f"{a} must lie inside {b}", s.surface)

    for check in s.checks:
        if check == "growth_zeros":
            need("K", "U")
        elif check in ("theorem1", "theorem2"):
            need("gamma", "U2"), need("U2", "U1"), need("U1", "U")
        elif check == "lemma1":
            need("gamma", "U2"), need("U2", "U1")
        elif check == "lemma2":
            need("U2", "U1"), need("U1", "U")
            roots = np.array(g["p_roots"], dtype=complex)
            if roots.size and not np.all(g["U1"].contains(roots)):
                raise ValidationError("all p_roots must lie inside U1")
        elif check in ("lemma3", "koebe"):
            phi: ConformalMapEntry = g["conformal"]
            try:
                eps = gap_curve(g["gamma"], phi.source)
            except ContainmentError as exc:
                raise ValidationError(f"gamma must lie inside the conformal source: {exc}") from None
            if "epsilon" in g and g["epsilon"] > eps * (1 + 1e-12):
                raise ValidationError(f"epsilon={g['epsilon']} exceeds the measured gap {eps:.6g}")


def scenario_from_dict(d: dict, validate: bool = True) -> Scenario:
    """Build a :class:`Scenario` from its JSON object.

    Raises
    ------
    ParseError
        On malformed fields.
    ValidationError
        On unknown checks, incompatible geometry or failed containment.
    """
    if not isinstance(d, dict):
        raise ParseError("scenario must be a JSON object")
    sid = str(d.get("id", "scenario"))
    checks = d.get("checks")
    if not isinstance(checks, list) or not checks:
        raise ParseError("field 'checks' must be a non-empty list")
    bad = [c for c in checks if c not in CHECKS]
    if bad:
        raise ValidationError(f"unknown checks {bad}; choose from {list(CHECKS)}")
    if len(set(checks)) != len(checks):
        raise ValidationError("each check may be requested once")
    cover = _field("cover", CoverSpec.from_dict, d["cover"]) if d.get("cover") is not None else None
    function = _field("function", expr_from_dict, d["function"]) if d.get("function") is not None else None
    geometry = d.get("geometry", {})
    if not isinstance(geometry, dict):
        raise ParseError("field 'geometry' must be an object")
    grid_raw = d.get("grid") or {}
    grid = _field("grid", lambda g: GridParams(g.get("h"), int(g.get("connectivity", 48)),
                                               int(g.get("levels", 2))), grid_raw)
    tol = _field("tolerance", float, d.get("tolerance", 1e-6))
    if not tol >= 0:
        raise ValidationError("tolerance must be non-negative")
    seed = d.get("seed")
    s = Scenario(sid, tuple(checks), function, cover, _parse_geometry(geometry, cover), tol, grid,
                 None if seed is None else int(seed), d)
    if validate:
        _validate(s)
    return s


def parse_scenario(path) -> Scenario:
    """Read and validate a scenario file.

    Raises
    ------
    ParseError
        With line and column for malformed JSON, or the offending field.
    ValidationError
        Naming the violated invariant.
    """
    text = Path(path).read_text()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return scenario_from_dict(d)
