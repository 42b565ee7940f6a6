"""Scenario configuration: a strict YAML schema with line/column diagnostics.

See README.md ("Config grammar") for the documented grammar. ``parse_config``
returns a :class:`ScenarioConfig` holding the normalized document (defaults
filled, numbers as floats); ``dump_config`` writes it back so that
``parse_config(dump_config(cfg)) == cfg``.
"""

from __future__ import annotations

import difflib
import math
import re
from dataclasses import dataclass, field

import yaml

from .errors import ConfigError
from .kernels import Polarization
from .model import (
    SI,
    ChargeWaveform,
    CircularLoop,
    CylindricalShell,
    PhysicalConstants,
    SampledPath,
    SegmentChain,
    Solenoid,
    SphericalShell,
)

SCENARIOS = ("magnetic", "intermediate", "electric", "kernel-check")
ROUTES = ("real", "modespace")
POLS = tuple(p.value for p in Polarization)

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*(pi)?\s*(?:/\s*(\d+\.?\d*))?\s*$")


def parse_number(value):
    """float from a YAML scalar; strings such as 'pi/4', '3*pi/2' or '2pi' are accepted."""
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        m = _NUMBER.match(value)
        if m and (m.group(1) or m.group(2)):
            x = float(m.group(1)) if m.group(1) else 1.0
            if m.group(2):
                x *= math.pi
            if m.group(3):
                x /= float(m.group(3))
            return x
    raise ValueError(f"not a number: {value!r}")


# --------------------------------------------------------------------------
# field kinds


class _Field:
    def __init__(self, kind, default=..., choices=None, nullable=False):
        self.kind = kind
        self.default = default
        self.choices = choices
        self.nullable = nullable

    @property
    def required(self):
        return self.default is ...


def _req(kind, **kw):
    return _Field(kind, **kw)


def _opt(kind, default, **kw):
    return _Field(kind, default, **kw)


_CONSTANTS = {name: _opt("pos", getattr(SI, name)) for name in ("hbar", "c", "eps0", "mu0", "e_charge")}

_WAVEFORM = {
    "shape": _req("choice", choices=("table", "rectangular", "triangular", "raised_cosine", "zero")),
    "times": _opt("floats", None, nullable=True),
    "charges": _opt("floats", None, nullable=True),
    "start": _opt("float", 0.0),
    "duration": _opt("pos", 1.0),
    # pulse size: either the charge-time area (C s) or a target potential area (V s)
    "area": _opt("float", None, nullable=True),
    "potential_area": _opt("float", None, nullable=True),
}

_SOURCES = {
    "solenoid": {
        "name": _req("str"), "center": _opt("vec3", [0.0, 0.0, 0.0]), "axis": _opt("vec3", [0.0, 0.0, 1.0]),
        "radius": _req("pos"), "length": _req("pos"), "turns_per_meter": _req("pos"), "current": _req("float"),
    },
    "loop": {
        "name": _req("str"), "center": _opt("vec3", [0.0, 0.0, 0.0]), "axis": _opt("vec3", [0.0, 0.0, 1.0]),
        "radius": _req("pos"), "current": _req("float"),
    },
    "segments": {"name": _req("str"), "points": _req("vec3s"), "current": _req("float")},
    "sphere": {"name": _req("str"), "center": _opt("vec3", [0.0, 0.0, 0.0]), "radius": _req("pos"),
               "waveform": _opt("waveform", {"shape": "zero"})},
    "tube": {"name": _req("str"), "center": _opt("vec3", [0.0, 0.0, 0.0]), "axis": _opt("vec3", [1.0, 0.0, 0.0]),
             "radius": _req("pos"), "length": _req("pos"), "waveform": _opt("waveform", {"shape": "zero"})},
}

_PATHS = {
    "circle": {"name": _req("str"), "center": _opt("vec3", [0.0, 0.0, 0.0]), "axis": _opt("vec3", [0.0, 0.0, 1.0]),
               "radius": _req("pos"), "samples": _opt("count", 256), "speed": _opt("pos", 1.0)},
    "polygon": {"name": _req("str"), "vertices": _req("vec3s"), "split": _opt("count", None, nullable=True),
                "speed": _opt("pos", 1.0)},
    "polyline": {"name": _req("str"), "points": _req("vec3s"), "times": _opt("floats", None, nullable=True),
                 "speed": _opt("pos", 1.0), "t0": _opt("float", 0.0)},
}

_SECTIONS = {
    "magnetic": {
        "sources": _opt("names", None, nullable=True),
        "circuit": _opt("str", None, nullable=True),
        "arms": _opt("names", None, nullable=True),
        "route": _opt("choice", "real", choices=ROUTES),
        "pol": _opt("choice", "full", choices=POLS),
    },
    "intermediate": {
        "solenoid": _req("str"),
        "theta": _opt("float", math.pi),
        "source_radius": _opt("pos", None, nullable=True),
        "trap_radius": _opt("pos", None, nullable=True),
        "source_angle": _opt("float", math.pi / 2),
        "samples": _opt("count", 256),
        "screen_point": _opt("vec3", None, nullable=True),
        "route": _opt("choice", "real", choices=ROUTES),
        "pol": _opt("choice", "full", choices=POLS),
    },
    "electric": {
        "tubes": _req("names"),
        "arms": _opt("names", None, nullable=True),
        "split_point": _opt("vec3", None, nullable=True),
        "merge_point": _opt("vec3", None, nullable=True),
        "speed": _opt("pos", 1.0e6),
    },
    "kernel_check": {
        "samples": _opt("count", 20),
        "r_min": _opt("pos", 0.01),
        "r_max": _opt("pos", 10.0),
        "pols": _opt("choices", list(POLS), choices=POLS),
    },
}

_NUMERICS = {
    "n_loops": _opt("count", None, nullable=True),
    "loop_nodes": _opt("count", 64),
    "kernel_method": _opt("choice", "quadrature", choices=("quadrature", "closed_form")),
    "exclusion_radius": _opt("pos", 1e-6),
    "flux_loops": _opt("count", None, nullable=True),
    "flux_ratio": _opt("pos", 1.0),
    "flux_angular": _opt("count", 64),
    "tol": _opt("pos", None, nullable=True),
    "seed": _opt("int", 0),
}

_SWEEP = {
    "parameter": _req("choice", choices=("theta", "current_scale", "pulse_scale")),
    "values": _opt("floats", None, nullable=True),
    "linspace": _opt("floats", None, nullable=True),
}

_TOP = {
    "scenario": _req("choice", choices=SCENARIOS),
    "constants": _opt("section", None),
    "particle": _opt("section", None),
    "sources": _opt("list", []),
    "paths": _opt("list", []),
    "magnetic": _opt("section", None),
    "intermediate": _opt("section", None),
    "electric": _opt("section", None),
    "kernel_check": _opt("section", None),
    "numerics": _opt("section", None),
    "sweep": _opt("section", None, nullable=True),
}

_PARTICLE = {"charge": _opt("float", None, nullable=True)}

DEFAULT_TOL = {"magnetic": 0.01, "intermediate": 0.01, "electric": 0.02, "kernel-check": 1e-6}


# --------------------------------------------------------------------------
# YAML with source marks


_KEY = "<key>"  # mark-path suffix for the position of a mapping key rather than its value


def _load(text):
    """Plain data plus a map from key path to (line, column), 1-based."""
    loader = yaml.SafeLoader(text)
    marks = {}
    try:
        node = loader.get_single_node()

        def build(n, path):
            marks[path] = (n.start_mark.line + 1, n.start_mark.column + 1)
            if isinstance(n, yaml.MappingNode):
                out = {}
                for k, v in n.value:
                    key = loader.construct_object(k, deep=True)
                    if not isinstance(key, str):
                        raise ConfigError(f"keys must be strings, got {key!r}", line=k.start_mark.line + 1,
                                          column=k.start_mark.column + 1)
                    if key in out:
                        raise ConfigError(f"duplicate key {key!r}", ".".join(map(str, path + (key,))),
                                          k.start_mark.line + 1, k.start_mark.column + 1)
                    marks[path + (key, _KEY)] = (k.start_mark.line + 1, k.start_mark.column + 1)
                    out[key] = build(v, path + (key,))
                return out
            if isinstance(n, yaml.SequenceNode):
                return [build(v, path + (i,)) for i, v in enumerate(n.value)]
            return loader.construct_object(n, deep=True)

        data = None if node is None else build(node, ())
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line, col = (mark.line + 1, mark.column + 1) if mark else (None, None)
        raise ConfigError(f"YAML parse error: {exc.problem or exc}", line=line, column=col) from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"YAML parse error: {exc}") from None
    finally:
        loader.dispose()
    return data, marks


class _Ctx:
    def __init__(self, marks):
        self.marks = marks

    def fail(self, message, path, at_key=False):
        line, col = self.marks.get(tuple(path) + (_KEY,) if at_key else tuple(path), (None, None))
        if line is None:
            # fall back to the nearest enclosing node that has a mark
            p = tuple(path)
            while p and p not in self.marks:
                p = p[:-1]
            line, col = self.marks.get(p, (None, None))
        raise ConfigError(message, ".".join(map(str, path)) or "<root>", line, col)


def _coerce(kind, value, path, ctx, spec):
    if value is None:
        if spec.nullable:
            return None
        ctx.fail("value must not be null", path)
    try:
        if kind in ("float", "pos"):
            x = parse_number(value)
            if not math.isfinite(x):
                raise ValueError("must be finite")
            if kind == "pos" and not x > 0:
                ctx.fail(f"must be strictly positive, got {value!r}", path)
            return x
        if kind == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError("must be an integer")
            return value
        if kind == "count":
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError("must be an integer")
            if value < 1:
                ctx.fail(f"must be >= 1, got {value!r}", path)
            return value
        if kind == "str":
            if not isinstance(value, str) or not value:
                raise ValueError("must be a non-empty string")
            return value
        if kind == "choice":
            if value not in spec.choices:
                hint = difflib.get_close_matches(str(value), spec.choices, n=1)
                extra = f"; did you mean {hint[0]!r}?" if hint else ""
                ctx.fail(f"must be one of {list(spec.choices)}, got {value!r}{extra}", path)
            return value
        if kind == "choices":
            if not isinstance(value, list) or not value:
                raise ValueError("must be a non-empty list")
            return [_coerce("choice", v, path + [i], ctx, spec) for i, v in enumerate(value)]
        if kind == "names":
            if not isinstance(value, list) or not value:
                raise ValueError("must be a non-empty list of names")
            return [_coerce("str", v, path + [i], ctx, spec) for i, v in enumerate(value)]
        if kind == "vec3":
            if not isinstance(value, list) or len(value) != 3:
                raise ValueError("must be a list of three numbers")
            out = [parse_number(v) for v in value]
            if not all(math.isfinite(v) for v in out):
                raise ValueError("components must be finite")
            return out
        if kind == "vec3s":
            if not isinstance(value, list) or len(value) < 2:
                raise ValueError("must be a list of at least two points")
            return [_coerce("vec3", v, path + [i], ctx, spec) for i, v in enumerate(value)]
        if kind == "floats":
            if not isinstance(value, list) or not value:
                raise ValueError("must be a non-empty list of numbers")
            return [parse_number(v) for v in value]
    except ValueError as exc:
        ctx.fail(str(exc), path)
    raise AssertionError(kind)


def _section(schema, data, path, ctx, extra=()):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        ctx.fail("must be a mapping", path)
    known = list(schema) + list(extra)
    for key in data:
        if key not in known:
            hint = difflib.get_close_matches(str(key), known, n=1, cutoff=0.0)
            extra_msg = f"; did you mean {hint[0]!r}?" if hint else ""
            ctx.fail(f"unknown key {key!r}{extra_msg}", path + [key], at_key=True)
    out = {}
    for key, spec in schema.items():
        if key not in data:
            if spec.required:
                ctx.fail(f"missing required key {key!r}", path + [key])
            default = _copy_default(spec.default)
            out[key] = _waveform(default, path + [key], ctx) if spec.kind == "waveform" else default
            continue
        out[key] = _value(spec, data[key], path + [key], ctx)
    return out


def _copy_default(d):
    if isinstance(d, list):
        return [_copy_default(x) for x in d]
    if isinstance(d, dict):
        return {k: _copy_default(v) for k, v in d.items()}
    return d


def _value(spec, value, path, ctx):
    if spec.kind in ("section", "list"):
        return value  # validated by the caller
    if spec.kind == "waveform":
        return _waveform(value, path, ctx)
    return _coerce(spec.kind, value, path, ctx, spec)


def _waveform(data, path, ctx):
    wf = _section(_WAVEFORM, data, path, ctx)
    shape = wf["shape"]
    if shape == "table":
        if wf["times"] is None or wf["charges"] is None:
            ctx.fail("a table waveform needs 'times' and 'charges'", path)
        if len(wf["times"]) != len(wf["charges"]):
            ctx.fail("'times' and 'charges' must have equal length", path + ["charges"])
        if any(b <= a for a, b in zip(wf["times"], wf["times"][1:])):
            ctx.fail("waveform times must be strictly increasing", path + ["times"])
    elif shape != "zero":
        if (wf["area"] is None) == (wf["potential_area"] is None):
            ctx.fail(f"a {shape} pulse needs exactly one of 'area' or 'potential_area'", path)
    return wf


def _typed_list(table, items, path, ctx, what):
    if not isinstance(items, list):
        ctx.fail(f"{what} must be a list", path)
    out, names = [], set()
    for i, item in enumerate(items):
        p = path + [i]
        if not isinstance(item, dict) or "type" not in item:
            ctx.fail(f"each {what[:-1]} needs a 'type'", p)
        kind = item["type"]
        if kind not in table:
            hint = difflib.get_close_matches(str(kind), list(table), n=1)
            extra = f"; did you mean {hint[0]!r}?" if hint else ""
            ctx.fail(f"unknown {what[:-1]} type {kind!r}{extra}", p + ["type"])
        body = _section(table[kind], {k: v for k, v in item.items() if k != "type"}, p, ctx)
        if body["name"] in names:
            ctx.fail(f"duplicate {what[:-1]} name {body['name']!r}", p + ["name"])
        names.add(body["name"])
        out.append({"type": kind, **body})
    return out


# --------------------------------------------------------------------------
# the config object


@dataclass
class ScenarioConfig:
    scenario: str
    constants: dict
    particle: dict
    sources: list
    paths: list
    settings: dict
    numerics: dict
    sweep: dict | None = None
    marks: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def tol(self) -> float:
        t = self.numerics["tol"]
        return DEFAULT_TOL[self.scenario] if t is None else t

    def physical_constants(self) -> PhysicalConstants:
        try:
            return PhysicalConstants(**self.constants)
        except ValueError as exc:
            raise ConfigError(str(exc), "constants") from None

    def charge(self) -> float:
        q = self.particle["charge"]
        return self.constants["e_charge"] if q is None else q

    def section_key(self) -> str:
        return self.scenario.replace("-", "_")

    def with_overrides(self, scenario=None, pol=None, seed=None, tol=None) -> "ScenarioConfig":
        """New config with command-line overrides applied and re-validated."""
        doc = to_document(self)
        if scenario is not None and scenario != self.scenario:
            # the old scenario's section does not apply to the new one
            doc.pop(self.section_key(), None)
            doc["scenario"] = scenario
        key = (scenario or self.scenario).replace("-", "_")
        if pol is not None:
            sect = doc.setdefault(key, {}) or {}
            if key == "kernel_check":
                sect["pols"] = [pol]
            elif key in ("magnetic", "intermediate"):
                sect["pol"] = pol
                if pol != "full" and sect.get("route", "real") == "real":
                    sect["route"] = "modespace"
            doc[key] = sect
        if seed is not None:
            doc["numerics"]["seed"] = int(seed)
        if tol is not None:
            doc["numerics"]["tol"] = float(tol)
        return validate(doc)

    # object builders -----------------------------------------------------

    def source_objects(self) -> dict:
        out = {}
        constants = self.physical_constants()
        # tubes given a potential_area pulse are scaled against the other tube
        # of the electric scenario, so resolve them after the plain sources
        pending = []
        for s in self.sources:
            kind = s["type"]
            if kind == "solenoid":
                out[s["name"]] = Solenoid(s["center"], s["axis"], s["radius"], s["length"], s["turns_per_meter"],
                                          s["current"], s["name"])
            elif kind == "loop":
                out[s["name"]] = CircularLoop(s["center"], s["axis"], s["radius"], s["current"], s["name"])
            elif kind == "segments":
                out[s["name"]] = SegmentChain(s["points"], s["current"], s["name"])
            else:
                wf = s["waveform"]
                if wf["potential_area"] is not None:
                    pending.append(s)
                    continue
                out[s["name"]] = self._charge_source(s, _build_waveform(wf, wf["area"]))
        for s in pending:
            out[s["name"]] = self._scaled_source(s, out, constants)
        return out

    def _charge_source(self, s, waveform):
        if s["type"] == "sphere":
            return SphericalShell(s["center"], s["radius"], waveform, s["name"])
        return CylindricalShell(s["center"], s["axis"], s["radius"], s["length"], waveform, s["name"])

    def _scaled_source(self, s, built, constants):
        from .scenarios import charge_for_potential

        wf = s["waveform"]
        probe = self._charge_source(s, ChargeWaveform.zero())
        partner = None
        if self.scenario == "electric":
            names = self.settings["tubes"]
            others = [n for n in names if n != s["name"]]
            if s["name"] in names and others:
                partner = next(x for x in self.sources if x["name"] == others[0])
        if partner is None:
            raise ConfigError("'potential_area' pulses are only defined for the tubes of an electric scenario",
                              f"sources.{s['name']}.waveform.potential_area")
        other = self._charge_source(partner, ChargeWaveform.zero())
        charge_per_volt = charge_for_potential(probe, other, 1.0, constants)
        return self._charge_source(s, _build_waveform(wf, wf["potential_area"] * charge_per_volt))

    def path_objects(self) -> dict:
        out = {}
        for p in self.paths:
            if p["type"] == "polyline":
                if p["times"] is not None:
                    if len(p["times"]) != len(p["points"]):
                        raise ConfigError("'times' and 'points' must have equal length", f"paths.{p['name']}.times")
                    out[p["name"]] = SampledPath(p["times"], p["points"])
                else:
                    out[p["name"]] = SampledPath.from_points(p["points"], p["t0"], p["speed"])
            else:
                out[p["name"]] = p
        return out


def _build_waveform(wf, area):
    shape = wf["shape"]
    if shape == "table":
        return ChargeWaveform(wf["times"], wf["charges"])
    if shape == "zero":
        return ChargeWaveform.zero()
    from .scenarios import pulse

    return pulse(shape, wf["start"], wf["duration"], area)


def _check_refs(cfg: ScenarioConfig, ctx: _Ctx):
    sources = {s["name"]: s for s in cfg.sources}
    paths = {p["name"]: p for p in cfg.paths}
    key = cfg.section_key()
    s = cfg.settings
    base = [key]

    def need(names, table, what, field_name, kinds=None, indexed=True):
        for i, n in enumerate(names):
            where = base + ([field_name, i] if indexed else [field_name])
            if n not in table:
                hint = difflib.get_close_matches(n, list(table), n=1)
                extra = f"; did you mean {hint[0]!r}?" if hint else ""
                ctx.fail(f"unknown {what} {n!r}{extra}", where)
            if kinds and table[n]["type"] not in kinds:
                ctx.fail(f"{what} {n!r} must be of type {' or '.join(kinds)}", where)

    if cfg.scenario == "magnetic":
        names = s["sources"] if s["sources"] is not None else [
            n for n, x in sources.items() if x["type"] in ("solenoid", "loop", "segments")]
        if not names:
            ctx.fail("the magnetic scenario needs at least one current source", ["sources"])
        need(names, sources, "source", "sources", ("solenoid", "loop", "segments"))
        if (s["circuit"] is None) == (s["arms"] is None):
            ctx.fail("give exactly one of 'circuit' or 'arms'", base)
        if s["circuit"] is not None:
            need([s["circuit"]], paths, "path", "circuit", ("circle", "polygon"), indexed=False)
        else:
            if len(s["arms"]) != 2:
                ctx.fail("'arms' must name exactly two paths", base + ["arms"])
            need(s["arms"], paths, "path", "arms", ("polyline",))
    elif cfg.scenario == "intermediate":
        need([s["solenoid"]], sources, "source", "solenoid", ("solenoid",), indexed=False)
    elif cfg.scenario == "electric":
        if len(s["tubes"]) != 2:
            ctx.fail("'tubes' must name exactly two tube sources", base + ["tubes"])
        need(s["tubes"], sources, "source", "tubes", ("tube",))
        if s["arms"] is not None:
            if len(s["arms"]) != 2:
                ctx.fail("'arms' must name exactly two paths", base + ["arms"])
            need(s["arms"], paths, "path", "arms", ("polyline",))
        elif s["split_point"] is None or s["merge_point"] is None:
            ctx.fail("without 'arms' give 'split_point' and 'merge_point'", base)
    sweep = cfg.sweep
    if sweep is not None:
        allowed = {"magnetic": ("current_scale",), "intermediate": ("theta", "current_scale"),
                   "electric": ("pulse_scale",), "kernel-check": ()}[cfg.scenario]
        if sweep["parameter"] not in allowed:
            ctx.fail(f"sweep parameter {sweep['parameter']!r} does not apply to the {cfg.scenario} scenario",
                     ["sweep", "parameter"])
        if (sweep["values"] is None) == (sweep["linspace"] is None):
            ctx.fail("give exactly one of 'values' or 'linspace'", ["sweep"])
        if sweep["linspace"] is not None:
            ls = sweep["linspace"]
            if len(ls) != 3 or ls[2] < 1 or ls[2] != int(ls[2]):
                ctx.fail("'linspace' is [start, stop, count] with count >= 1", ["sweep", "linspace"])


def validate(doc, marks=None) -> ScenarioConfig:
    ctx = _Ctx(marks or {})
    if not isinstance(doc, dict):
        ctx.fail("the config document must be a mapping", [])
    top = _section(_TOP, doc, [], ctx)
    scenario = top["scenario"]
    key = scenario.replace("-", "_")
    for other in _SECTIONS:
        if other != key and top[other] is not None:
            ctx.fail(f"section {other!r} does not apply to scenario {scenario!r}", [other])
    cfg = ScenarioConfig(
        scenario=scenario,
        constants=_section(_CONSTANTS, top["constants"], ["constants"], ctx),
        particle=_section(_PARTICLE, top["particle"], ["particle"], ctx),
        sources=_typed_list(_SOURCES, top["sources"], ["sources"], ctx, "sources"),
        paths=_typed_list(_PATHS, top["paths"], ["paths"], ctx, "paths"),
        settings=_section(_SECTIONS[key], top[key], [key], ctx),
        numerics=_section(_NUMERICS, top["numerics"], ["numerics"], ctx),
        sweep=None if top["sweep"] is None else _section(_SWEEP, top["sweep"], ["sweep"], ctx),
        marks=dict(marks or {}),
    )
    try:
        cfg.physical_constants()
    except ConfigError as exc:
        ctx.fail(str(exc), ["constants"])
    _check_refs(cfg, ctx)
    return cfg


def parse_config(text: str) -> ScenarioConfig:
    data, marks = _load(text)
    return validate(data, marks)


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text)


def to_document(cfg: ScenarioConfig) -> dict:
    doc = {
        "scenario": cfg.scenario,
        "constants": _copy_default(cfg.constants),
        "particle": _copy_default(cfg.particle),
        "sources": _copy_default(cfg.sources),
        "paths": _copy_default(cfg.paths),
        cfg.section_key(): _copy_default(cfg.settings),
        "numerics": _copy_default(cfg.numerics),
    }
    if cfg.sweep is not None:
        doc["sweep"] = _copy_default(cfg.sweep)
    return doc


def dump_config(cfg: ScenarioConfig) -> str:
    """Normalized YAML (all defaults explicit); floats are written with full precision."""
    return yaml.safe_dump(to_document(cfg), sort_keys=False, default_flow_style=None)


def sweep_values(cfg: ScenarioConfig):
    if cfg.sweep is None:
        return None
    if cfg.sweep["values"] is not None:
        return list(cfg.sweep["values"])
    start, stop, num = cfg.sweep["linspace"]
    n = int(num)
    if n == 1:
        return [start]
    return [start + (stop - start) * i / (n - 1) for i in range(n)]
