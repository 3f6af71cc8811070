"""Scenario configuration: a flat-key text format with unit tags.

A config document is a sequence of ``key = value`` lines ('#' starts a
comment).  Keys are dotted names (``quantum.e0``, ``grid.e.n``).  Values
are numbers, comma-separated number lists, or enumerated strings; in SI
configs a numeric value may carry a unit tag, e.g. ``box.g = 9.81 m/s^2``,
which must match the dimension the schema declares for that key.

Reserved top-level keys: ``kind``, ``units`` (SI or NATURAL), ``seed``,
``output``, and the sweep block ``sweep.param`` plus either
``sweep.values`` or ``sweep.min``/``sweep.max``/``sweep.count`` (with
optional ``sweep.scale`` = linear|log).

Randomized probes (bracket points) are derived from ``seed`` with a
splittable counter scheme: probe i draws from a Philox stream keyed
(seed, i), so runs are reproducible and parallelizable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from .units import UnitSystem

UNIT_TAGS = {
    "kg": "mass",
    "s": "time",
    "J": "energy",
    "m": "length",
    "kg*m/s": "momentum",
    "m/s": "speed",
    "m/s^2": "acceleration",
    "C": "charge",
    "V/m": "electric_field",
    "N/m": "spring_constant",
}

KINDS = (
    "GEDANKEN_BOX",
    "GEDANKEN_EFIELD",
    "CLASSICAL_TRAJECTORY",
    "CLASSICAL_BRACKETS",
    "QUANTUM_MOMENTS",
    "QUANTUM_BOUND_SWEEP",
    "QUANTUM_OPTIMIZE",
)


class ConfigError(Exception):
    """Carries every schema violation found, not just the first."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class ParamSpec:
    key: str
    dimension: str = "dimensionless"
    default: Any = None
    required: bool = False
    kind: str = "number"  # number | int | list | string
    choices: tuple[str, ...] | None = None


@dataclass(frozen=True)
class SweepSpec:
    param: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    params: dict[str, Any]
    sweep: SweepSpec | None
    output: str
    units: UnitSystem
    seed: int

    def echo(self) -> dict[str, Any]:
        """JSON-friendly snapshot for run reports."""
        sweep = None
        if self.sweep is not None:
            sweep = {"param": self.sweep.param, "values": list(self.sweep.values)}
        return {
            "kind": self.kind,
            "units": self.units.value,
            "seed": self.seed,
            "output": self.output,
            "params": {k: (list(v) if isinstance(v, tuple) else v)
                       for k, v in sorted(self.params.items())},
            "sweep": sweep,
        }


def _quantum_state_params(sigma_e: float, p0: float, sigma_p: float) -> list[ParamSpec]:
    return [
        ParamSpec("quantum.e0", "energy", 10.0),
        ParamSpec("quantum.sigma_e", "energy", sigma_e),
        ParamSpec("quantum.tau0", "time", 0.0),
        ParamSpec("quantum.p0", "momentum", p0),
        ParamSpec("quantum.sigma_p", "momentum", sigma_p),
        ParamSpec("quantum.x0", "length", 0.0),
        ParamSpec("grid.e.n", "dimensionless", 1024, kind="int"),
        ParamSpec("grid.p.n", "dimensionless", 256, kind="int"),
    ]


SCHEMAS: dict[str, list[ParamSpec]] = {
    "GEDANKEN_BOX": [
        ParamSpec("box.dq", "length", 1e-6),
        ParamSpec("box.t", "time", 1.0),
        ParamSpec("box.g", "acceleration", 9.81),
        ParamSpec("box.spring_k", "spring_constant"),
        ParamSpec("box.spring_l", "length"),
    ],
    "GEDANKEN_EFIELD": [
        ParamSpec("efield.dq", "length", 1e-6),
        ParamSpec("efield.t", "time", 1.0),
        # v must stay below c, which is 1 in the default natural units
        ParamSpec("efield.v", "speed", 0.5),
        ParamSpec("efield.e_field", "electric_field"),
        ParamSpec("efield.charge", "charge"),
    ],
    "CLASSICAL_TRAJECTORY": [
        ParamSpec("classical.metric", kind="string", default="flat",
                  choices=("flat", "uniform_lapse")),
        ParamSpec("classical.m", "energy", 1.0),
        ParamSpec("classical.charge", "dimensionless", 0.0),
        ParamSpec("classical.tau0", "time", 0.0),
        ParamSpec("classical.x1", "length", 0.0),
        ParamSpec("classical.x2", "length", 0.0),
        ParamSpec("classical.x3", "length", 0.0),
        ParamSpec("classical.p1", "momentum", 0.75),
        ParamSpec("classical.p2", "momentum", 0.0),
        ParamSpec("classical.p3", "momentum", 0.0),
        ParamSpec("classical.t_end", "time", 10.0),
        ParamSpec("classical.dt", "time", 1e-3),
        ParamSpec("classical.lapse_g", "acceleration", 0.0),
        ParamSpec("classical.a0_slope", "dimensionless", 0.0),
        ParamSpec("classical.hold", "dimensionless", 0.0),
    ],
    "CLASSICAL_BRACKETS": [
        ParamSpec("brackets.points", "dimensionless", 50, kind="int"),
        ParamSpec("brackets.h_step", "dimensionless", 1e-5),
        ParamSpec("brackets.scale", "dimensionless", 2.0),
    ],
    "QUANTUM_MOMENTS": _quantum_state_params(0.5, 0.0, 0.5) + [
        ParamSpec("quantum.times", "time", (0.0, 1.0, 10.0, 100.0), kind="list"),
        ParamSpec("quantum.snapshot", kind="string", default=""),
    ],
    "QUANTUM_BOUND_SWEEP": _quantum_state_params(0.5, 1000.0, 0.05) + [
        ParamSpec("quantum.t", "time", 100.0),
    ],
    "QUANTUM_OPTIMIZE": [
        ParamSpec("quantum.e0", "energy", 10.0),
        ParamSpec("quantum.p0", "momentum", 1000.0),
        ParamSpec("quantum.sigma_p", "momentum", 0.05),
        ParamSpec("quantum.t", "time", 100.0),
        ParamSpec("optimize.sigma_lo", "energy", 0.0),
        ParamSpec("optimize.sigma_hi", "energy", 0.0),
        ParamSpec("grid.e.n", "dimensionless", 1024, kind="int"),
        ParamSpec("grid.p.n", "dimensionless", 256, kind="int"),
    ],
}

_RESERVED = ("kind", "units", "seed", "output")
_SWEEP_KEYS = ("sweep.param", "sweep.values", "sweep.min", "sweep.max",
               "sweep.count", "sweep.scale")


def _split_lines(text: str) -> list[tuple[str, str]]:
    pairs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError([f"malformed line (expected key = value): {raw.strip()!r}"])
        key, value = line.split("=", 1)
        pairs.append((key.strip(), value.strip()))
    return pairs


def _parse_number(key: str, text: str, dimension: str, units: UnitSystem,
                  violations: list[str]) -> float | None:
    parts = text.split(None, 1)
    try:
        value = float(parts[0])
    except (ValueError, IndexError):
        violations.append(f"{key}: non-numeric value {text!r}")
        return None
    if len(parts) == 2:
        tag = parts[1].strip()
        tag_dim = UNIT_TAGS.get(tag)
        if tag_dim is None:
            violations.append(f"{key}: unknown unit tag {tag!r}")
            return None
        if units is not UnitSystem.SI:
            violations.append(f"{key}: unit tags are only meaningful in SI configs")
            return None
        if tag_dim != dimension:
            violations.append(
                f"{key}: unit tag {tag!r} is {tag_dim}, expected {dimension}")
            return None
    return value


def _parse_list(key: str, text: str, violations: list[str]) -> tuple[float, ...] | None:
    out = []
    for tok in text.split(","):
        try:
            out.append(float(tok.strip()))
        except ValueError:
            violations.append(f"{key}: non-numeric list entry {tok.strip()!r}")
            return None
    if not out:
        violations.append(f"{key}: empty list")
        return None
    return tuple(out)


def _resolve_sweep(raw: dict[str, str], schema: dict[str, ParamSpec], units: UnitSystem,
                   violations: list[str]) -> SweepSpec | None:
    present = [k for k in _SWEEP_KEYS if k in raw]
    if not present:
        return None
    param = raw.get("sweep.param")
    if param is None:
        violations.append("sweep: missing sweep.param")
        return None
    spec = schema.get(param)
    if spec is None or spec.kind not in ("number",):
        violations.append(f"sweep: parameter {param!r} is not a sweepable numeric key")
        return None
    if "sweep.values" in raw:
        values = _parse_list("sweep.values", raw["sweep.values"], violations)
        if values is None:
            return None
        return SweepSpec(param=param, values=values)
    missing = [k for k in ("sweep.min", "sweep.max", "sweep.count") if k not in raw]
    if missing:
        violations.append(f"sweep: missing {', '.join(missing)} (or give sweep.values)")
        return None
    lo = _parse_number("sweep.min", raw["sweep.min"], spec.dimension, units, violations)
    hi = _parse_number("sweep.max", raw["sweep.max"], spec.dimension, units, violations)
    count_txt = raw["sweep.count"]
    try:
        count = int(count_txt)
    except ValueError:
        violations.append(f"sweep.count: non-numeric value {count_txt!r}")
        return None
    scale = raw.get("sweep.scale", "linear")
    if scale not in ("linear", "log"):
        violations.append(f"sweep.scale: must be linear or log, got {scale!r}")
        return None
    if lo is None or hi is None:
        return None
    if count < 1 or hi <= lo or (scale == "log" and lo <= 0.0):
        violations.append("sweep: need count >= 1 and max > min (min > 0 for log scale)")
        return None
    if count == 1:
        values = (lo,)
    elif scale == "log":
        ratio = (hi / lo) ** (1.0 / (count - 1))
        values = tuple(lo * ratio**i for i in range(count))
    else:
        step = (hi - lo) / (count - 1)
        values = tuple(lo + step * i for i in range(count))
    return SweepSpec(param=param, values=values)


def parse_config(text: str, kind_hint: str | None = None) -> ScenarioConfig:
    """Validate a config document; every violation is collected and reported
    together in the raised ConfigError."""
    violations: list[str] = []
    raw: dict[str, str] = {}
    for key, value in _split_lines(text):
        if key in raw:
            violations.append(f"duplicate key: {key}")
        raw[key] = value

    kind = raw.get("kind", kind_hint)
    if kind is None:
        violations.append("missing required key: kind")
    elif kind not in KINDS:
        violations.append(f"unknown kind: {kind!r} (expected one of {', '.join(KINDS)})")
        kind = None
    elif kind_hint is not None and kind != kind_hint:
        violations.append(f"kind {kind!r} conflicts with the invoked subcommand ({kind_hint})")

    units_txt = raw.get("units", "NATURAL")
    try:
        units = UnitSystem(units_txt)
    except ValueError:
        violations.append(f"units: must be SI or NATURAL, got {units_txt!r}")
        units = UnitSystem.NATURAL

    seed = 0
    if "seed" in raw:
        try:
            seed = int(raw["seed"])
        except ValueError:
            violations.append(f"seed: non-integer value {raw['seed']!r}")

    if kind is None:
        raise ConfigError(violations)

    output = raw.get("output", f"{kind.lower()}.csv")
    schema = {spec.key: spec for spec in SCHEMAS[kind]}
    params: dict[str, Any] = {}

    for key, value in raw.items():
        if key in _RESERVED or key in _SWEEP_KEYS:
            continue
        spec = schema.get(key)
        if spec is None:
            violations.append(f"unknown key for {kind}: {key}")
            continue
        if spec.kind == "number":
            parsed = _parse_number(key, value, spec.dimension, units, violations)
            if parsed is not None:
                params[key] = parsed
        elif spec.kind == "int":
            try:
                params[key] = int(value)
            except ValueError:
                violations.append(f"{key}: non-integer value {value!r}")
        elif spec.kind == "list":
            parsed_list = _parse_list(key, value, violations)
            if parsed_list is not None:
                params[key] = parsed_list
        elif spec.kind == "string":
            if spec.choices is not None and value not in spec.choices:
                violations.append(
                    f"{key}: {value!r} is not one of {', '.join(spec.choices)}")
            else:
                params[key] = value

    for spec in SCHEMAS[kind]:
        if spec.key in params:
            continue
        if spec.default is not None:
            params[spec.key] = spec.default
        elif spec.required:
            violations.append(f"missing required key: {spec.key}")

    sweep = _resolve_sweep(raw, schema, units, violations)
    if sweep is not None and not all(math.isfinite(v) for v in sweep.values):
        violations.append("sweep: values must be finite")

    if violations:
        raise ConfigError(violations)
    return ScenarioConfig(kind=kind, params=params, sweep=sweep, output=output,
                          units=units, seed=seed)
