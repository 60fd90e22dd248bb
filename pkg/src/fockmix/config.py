"""Scenario and sweep documents: parsing and validation.

Scenario document (JSON object)::

    input_kind  "fock_fock" | "fock_coherent" | "coherent_coherent"   (required)
    n           photon count in the first input (fock_fock, fock_coherent)
    m           photon count in the second input (fock_fock only)
    alpha       first coherent amplitude: number, [re, im], {"re":.., "im":..}
                or a string like "1+2j" (fock_coherent: the second input;
                coherent_coherent: the first input)
    beta        second coherent amplitude (coherent_coherent only)
    theta       mixing angle in radians, or "0", "pi/6", "pi/4", "pi/3", "pi/2"
    phi         phase in radians or "pi/2", "pi", ... (default pi/2)
    cutoffs     "auto" (default), an integer for both modes, or [first, second]
    outputs     subset of ["state", "stats", "oracle", "sample"]
                (default ["stats", "oracle"])
    shots, seed sampler settings, required when "sample" is requested

Sweep document::

    base        scenario document; the swept and series fields may be omitted
    sweep       {"variable": "m" | "alpha_modulus" | "theta",
                 "values": [...]} or {"variable": ..., "start": a, "stop": b, "step": h}
    series      optional {"variable": <name>, "values": [...]}, e.g. n in {0, 1, 2, 5, 10}
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import asdict, dataclass, field

from .beamsplitter import BeamsplitterParams
from .errors import ConfigInvalid
from .fock import DEFAULT_TAIL_TOL, auto_cutoff

INPUT_KINDS = ("fock_fock", "fock_coherent", "coherent_coherent")
OUTPUT_KINDS = ("state", "stats", "oracle", "sample")
SWEEP_VARIABLES = ("m", "alpha_modulus", "theta")
SERIES_VARIABLES = ("n", "m", "alpha_modulus", "theta")

_REQUIRED = {
    "fock_fock": ("n", "m"),
    "fock_coherent": ("n", "alpha"),
    "coherent_coherent": ("alpha", "beta"),
}
_OPTIONAL = ("theta", "phi", "cutoffs", "outputs", "shots", "seed")
_KIND_FIELDS = ("n", "m", "alpha", "beta")

ANGLE_LITERALS = {
    "0": 0.0,
    "pi/6": math.pi / 6,
    "pi/4": math.pi / 4,
    "pi/3": math.pi / 3,
    "pi/2": math.pi / 2,
    "pi": math.pi,
    "3pi/2": 3 * math.pi / 2,
}


@dataclass(frozen=True)
class ScenarioConfig:
    input_kind: str
    theta: float
    phi: float = math.pi / 2
    n: int | None = None
    m: int | None = None
    alpha: complex | None = None
    beta: complex | None = None
    cutoffs: tuple[int, int] | None = None  # None means auto
    outputs: tuple[str, ...] = ("stats", "oracle")
    shots: int | None = None
    seed: int | None = None

    @property
    def bs(self) -> BeamsplitterParams:
        return BeamsplitterParams(self.theta, self.phi)

    def resolved_cutoffs(self) -> tuple[int, int]:
        """Explicit cutoffs, or the automatic choice for this input kind.

        Fock pairs need exactly ``n + m``.  Coherent components use the
        smallest cutoff whose Poisson tail, taken on the total coherent mean,
        is below ``1e-12 * min(1, mean)``, plus ``n`` for the Fock+coherent
        case.  Scaling by the mean keeps ratio statistics accurate for very
        weak coherent inputs.
        """
        if self.cutoffs is not None:
            return self.cutoffs
        if self.input_kind == "fock_fock":
            c = self.n + self.m
        elif self.input_kind == "fock_coherent":
            c = self.n + _coherent_cutoff(abs(self.alpha) ** 2)
        else:
            c = _coherent_cutoff(abs(self.alpha) ** 2 + abs(self.beta) ** 2)
        return c, c

    def to_dict(self) -> dict:
        out = {}
        for key, value in asdict(self).items():
            if value is None:
                continue
            if isinstance(value, complex):
                value = [value.real, value.imag]
            elif isinstance(value, tuple):
                value = list(value)
            out[key] = value
        return out


def _coherent_cutoff(mean: float) -> int:
    return auto_cutoff(mean, DEFAULT_TAIL_TOL * min(1.0, mean))


@dataclass(frozen=True)
class SweepSpec:
    base: dict
    sweep_variable: str
    values: tuple
    series_variable: str | None = None
    series_values: tuple = field(default=(None,))

    def points(self):
        """Yield ``(series_value, sweep_value, ScenarioConfig)`` in row order."""
        for s in self.series_values:
            for v in self.values:
                doc = dict(self.base)
                if self.series_variable is not None:
                    _assign(doc, self.series_variable, s)
                _assign(doc, self.sweep_variable, v)
                yield s, v, validate_config(doc)


def _assign(doc: dict, variable: str, value) -> None:
    if variable == "alpha_modulus":
        base = doc.get("alpha")
        phase = cmath.phase(_parse_complex(base, "alpha")) if base is not None else 0.0
        doc["alpha"] = [value * math.cos(phase), value * math.sin(phase)] if phase else value
    else:
        doc[variable] = value


def _load(raw, what: str) -> dict:
    if isinstance(raw, dict):
        return raw
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(
            f"{what}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise ConfigInvalid(f"{what}: top level must be a JSON object")
    return doc


def parse_angle(value, name: str) -> float:
    if isinstance(value, str):
        key = value.replace(" ", "").lower()
        if key not in ANGLE_LITERALS:
            raise ConfigInvalid(
                f"{name}: unknown angle literal {value!r}; use radians or one of "
                + ", ".join(ANGLE_LITERALS),
                field=name,
            )
        return ANGLE_LITERALS[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigInvalid(f"{name}: expected a finite number or angle literal", field=name)
    return float(value)


def _parse_count(value, name: str) -> int:
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ConfigInvalid(f"{name}: expected a nonnegative integer, got {value!r}", field=name)
    return value


def _parse_complex(value, name: str) -> complex:
    try:
        if isinstance(value, bool):
            raise TypeError
        if isinstance(value, (int, float)):
            z = complex(value)
        elif isinstance(value, (list, tuple)) and len(value) == 2:
            z = complex(float(value[0]), float(value[1]))
        elif isinstance(value, dict) and set(value) <= {"re", "im"}:
            z = complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
        elif isinstance(value, str):
            z = complex(value.replace(" ", ""))
        else:
            raise TypeError
    except (TypeError, ValueError):
        raise ConfigInvalid(
            f"{name}: expected a number, [re, im], {{'re':..,'im':..}} or '1+2j', got {value!r}",
            field=name,
        ) from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ConfigInvalid(f"{name}: amplitude must be finite", field=name)
    return z


def validate_config(raw) -> ScenarioConfig:
    """Parse a scenario document (JSON text or dict) into a :class:`ScenarioConfig`.

    Raises:
        ConfigInvalid: naming the offending field.
    """
    doc = _load(raw, "scenario")
    kind = doc.get("input_kind")
    if kind not in INPUT_KINDS:
        raise ConfigInvalid(
            f"input_kind: expected one of {', '.join(INPUT_KINDS)}, got {kind!r}",
            field="input_kind",
        )
    required = _REQUIRED[kind]
    for key in doc:
        if key == "input_kind" or key in required or key in _OPTIONAL:
            continue
        if key in _KIND_FIELDS:
            raise ConfigInvalid(f"{key}: not allowed for input_kind {kind!r}", field=key)
        raise ConfigInvalid(f"{key}: unknown key", field=key)
    for key in required:
        if key not in doc:
            raise ConfigInvalid(f"{key}: required for input_kind {kind!r}", field=key)

    values: dict = {"input_kind": kind}
    for key in ("n", "m"):
        if key in required:
            values[key] = _parse_count(doc[key], key)
    for key in ("alpha", "beta"):
        if key in required:
            values[key] = _parse_complex(doc[key], key)

    if "theta" not in doc:
        raise ConfigInvalid("theta: required", field="theta")
    theta = parse_angle(doc["theta"], "theta")
    phi = parse_angle(doc.get("phi", math.pi / 2), "phi")
    try:
        BeamsplitterParams(theta, phi)
    except ValueError as exc:
        raise ConfigInvalid(f"theta: {exc}", field="theta") from None
    values["theta"], values["phi"] = theta, phi

    cutoffs = doc.get("cutoffs", "auto")
    if cutoffs == "auto":
        values["cutoffs"] = None
    elif isinstance(cutoffs, list) and len(cutoffs) == 2:
        values["cutoffs"] = (_parse_count(cutoffs[0], "cutoffs"), _parse_count(cutoffs[1], "cutoffs"))
    else:
        c = _parse_count(cutoffs, "cutoffs")
        values["cutoffs"] = (c, c)

    outputs = doc.get("outputs", ["stats", "oracle"])
    if not isinstance(outputs, list) or any(o not in OUTPUT_KINDS for o in outputs):
        raise ConfigInvalid(
            f"outputs: expected a list drawn from {', '.join(OUTPUT_KINDS)}", field="outputs"
        )
    values["outputs"] = tuple(o for o in OUTPUT_KINDS if o in outputs)

    for key in ("shots", "seed"):
        if key in doc:
            values[key] = _parse_count(doc[key], key)
    if values.get("shots") == 0:
        raise ConfigInvalid("shots: must be >= 1", field="shots")
    if "seed" in values and values["seed"] >= 2**64:
        raise ConfigInvalid("seed: must fit in 64 bits", field="seed")
    if "sample" in values["outputs"]:
        for key in ("shots", "seed"):
            if key not in values:
                raise ConfigInvalid(f"{key}: required when 'sample' is requested", field=key)
    return ScenarioConfig(**values)


def validate_sweep_spec(raw) -> SweepSpec:
    doc = _load(raw, "sweep spec")
    unknown = set(doc) - {"base", "sweep", "series"}
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigInvalid(f"{key}: unknown key", field=key)
    base = doc.get("base")
    if not isinstance(base, dict):
        raise ConfigInvalid("base: required scenario object", field="base")
    sweep = doc.get("sweep")
    if not isinstance(sweep, dict):
        raise ConfigInvalid("sweep: required object", field="sweep")
    variable = sweep.get("variable")
    if variable not in SWEEP_VARIABLES:
        raise ConfigInvalid(
            f"sweep.variable: expected one of {', '.join(SWEEP_VARIABLES)}", field="sweep.variable"
        )
    values = _sweep_values(sweep, variable, "sweep")

    series_var, series_values = None, (None,)
    series = doc.get("series")
    if series is not None:
        if not isinstance(series, dict) or series.get("variable") not in SERIES_VARIABLES:
            raise ConfigInvalid(
                f"series.variable: expected one of {', '.join(SERIES_VARIABLES)}",
                field="series.variable",
            )
        series_var = series["variable"]
        if series_var == variable:
            raise ConfigInvalid("series.variable: must differ from sweep.variable", field="series.variable")
        series_values = _sweep_values(series, series_var, "series")

    spec = SweepSpec(dict(base), variable, values, series_var, series_values)
    for _ in spec.points():  # surface per-point schema errors before any work
        pass
    return spec


def _sweep_values(block: dict, variable: str, name: str) -> tuple:
    extra = set(block) - {"variable", "values", "start", "stop", "step"}
    if extra:
        key = f"{name}.{sorted(extra)[0]}"
        raise ConfigInvalid(f"{key}: unknown key", field=key)
    if "values" in block:
        values = block["values"]
        if not isinstance(values, list) or not values:
            raise ConfigInvalid(f"{name}.values: expected a nonempty list", field=f"{name}.values")
    else:
        try:
            start, stop, step = (float(block[k]) for k in ("start", "stop", "step"))
        except (KeyError, TypeError, ValueError):
            raise ConfigInvalid(
                f"{name}: give either 'values' or numeric 'start', 'stop', 'step'", field=name
            ) from None
        if step <= 0 or stop < start:
            raise ConfigInvalid(f"{name}: need step > 0 and stop >= start", field=f"{name}.step")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [round(start + i * step, 12) for i in range(count)]
    if variable in ("n", "m"):
        return tuple(_parse_count(v, f"{name}.values") for v in values)
    if variable == "theta":
        return tuple(parse_angle(v, f"{name}.values") for v in values)
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)) or v < 0:
            raise ConfigInvalid(f"{name}.values: alpha_modulus must be >= 0", field=f"{name}.values")
        out.append(float(v))
    return tuple(out)
