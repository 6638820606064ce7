"""Strict, schema-driven run configuration.

Configs are JSON documents whose physical quantities are strings like
``"100 G"`` or ``"0.5 MHz"``.  The shipped ``config_schema.json`` defines
every legal key, its unit kind, range and default; parsing rejects
unknown keys, missing or wrong units and out-of-range values, always
reporting the offending key path.  Frequencies quoted in Hz-units carry
the conventional 2*pi into the internal angular unit (rad/us).

``parse_config`` fills defaults (protocol-dependent) and returns a
:class:`RunConfig` holding both the effective document (canonical form,
used for echoing and hashing) and the converted internal values.
``serialize_config(parse_config(text))`` is a fixed point.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass
from importlib import resources

from .hamiltonians import CarbonParams, PhysicalConstants, RegisterConfig
from .master_equation import DissipatorSpec
from .protocols import IntegratorSettings

__all__ = ["ConfigError", "RunConfig", "parse_config", "serialize_config", "SCHEMA"]

TWO_PI = 6.283185307179586


class ConfigError(ValueError):
    """Configuration rejected; the message carries the key path."""


def _load_schema() -> dict:
    with resources.files("nvdfs").joinpath("config_schema.json").open("rb") as fh:
        return json.load(fh)


SCHEMA = _load_schema()
_KEYS = SCHEMA["keys"]

# unit token -> (kind, factor to internal units)
_UNIT_FACTORS = {
    "GHz": ("frequency", TWO_PI * 1e3),
    "MHz": ("frequency", TWO_PI),
    "kHz": ("frequency", TWO_PI * 1e-3),
    "rad/us": ("frequency", 1.0),
    "MHz/G": ("gyromagnetic", TWO_PI),
    "kHz/G": ("gyromagnetic", TWO_PI * 1e-3),
    "us": ("time", 1.0),
    "G": ("field", 1.0),
    "G/us": ("ramp_rate", 1.0),
    "rad": ("angle", 1.0),
    "nm": ("distance", 1.0),
}

_QUANTITY_KINDS = {"frequency", "gyromagnetic", "time", "field", "ramp_rate", "angle", "distance"}


def _parse_quantity(value, kind: str, path: str) -> float:
    if not isinstance(value, str):
        raise ConfigError(
            f"{path}: expected a '<number> <unit>' string with a {kind} unit, got {value!r}"
        )
    parts = value.split()
    if len(parts) != 2:
        raise ConfigError(f"{path}: missing unit in {value!r} (expected '<number> <unit>')")
    num, unit = parts
    try:
        mag = float(num)
    except ValueError:
        raise ConfigError(f"{path}: cannot parse number in {value!r}") from None
    if unit not in _UNIT_FACTORS:
        raise ConfigError(f"{path}: unknown unit {unit!r}")
    unit_kind, factor = _UNIT_FACTORS[unit]
    if unit_kind != kind:
        raise ConfigError(f"{path}: unit {unit!r} is a {unit_kind}, expected a {kind}")
    return mag * factor


def _check_range(value: float, spec: dict, path: str) -> None:
    if "min" in spec and value < spec["min"]:
        raise ConfigError(f"{path}: value {value} below minimum {spec['min']}")
    if "min_exclusive" in spec and value <= spec["min_exclusive"]:
        raise ConfigError(f"{path}: value {value} must exceed {spec['min_exclusive']}")
    if "max" in spec and value > spec["max"]:
        raise ConfigError(f"{path}: value {value} above maximum {spec['max']}")


def _convert(value, spec: dict, path: str):
    """Validate one raw value against a schema entry; return internal value."""
    kind = spec["kind"]
    if value is None:
        if spec.get("nullable"):
            return None
        raise ConfigError(f"{path}: null is not allowed here")
    if kind in _QUANTITY_KINDS:
        val = _parse_quantity(value, kind, path)
        _check_range(val, spec, path)
        return val
    if kind == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        _check_range(float(value), spec, path)
        return float(value)
    if kind == "integer":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        _check_range(value, spec, path)
        return int(value)
    if kind == "boolean":
        if not isinstance(value, bool):
            raise ConfigError(f"{path}: expected true/false, got {value!r}")
        return value
    if kind == "string":
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected a string, got {value!r}")
        return value
    if kind == "choice":
        if value not in spec["choices"]:
            raise ConfigError(f"{path}: {value!r} is not one of {spec['choices']}")
        return value
    if kind == "carbon_array":
        if not isinstance(value, list) or not (1 <= len(value) <= 2):
            raise ConfigError(f"{path}: expected a list of 1 or 2 carbon records")
        return [
            _convert_section(item, "carbon", f"{path}[{i}]") for i, item in enumerate(value)
        ]
    if kind == "sweep_axes":
        if not isinstance(value, list):
            raise ConfigError(f"{path}: expected a list of axes")
        return [_convert_section(item, "axis", f"{path}[{i}]") for i, item in enumerate(value)]
    if kind == "raw_array":
        if not isinstance(value, list) or not value:
            raise ConfigError(f"{path}: expected a nonempty list")
        return list(value)
    raise ConfigError(f"{path}: unhandled schema kind {kind!r}")


def _section_keys(prefix: str) -> dict[str, dict]:
    plen = len(prefix) + 1
    return {
        key[plen:]: spec
        for key, spec in _KEYS.items()
        if key.startswith(prefix + ".") and "." not in key[plen:]
    }


def _convert_section(raw: dict, prefix: str, path: str) -> dict:
    """Validate a flat section, filling defaults and rejecting unknowns."""
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected an object")
    known = _section_keys(prefix)
    out = {}
    for key in raw:
        if key not in known:
            raise ConfigError(f"{path}.{key}: unknown key")
    for key, spec in known.items():
        if key in raw:
            out[key] = _convert(raw[key], spec, f"{path}.{key}")
        elif "default" in spec:
            default = spec["default"]
            out[key] = None if default is None else _convert(default, spec, f"{path}.{key}")
        else:
            raise ConfigError(f"{path}.{key}: required key missing")
    return out


@dataclass
class RunConfig:
    """Validated configuration: effective document plus internal values.

    ``effective`` is the canonical JSON-able document (all defaults
    filled, quantities as unit strings) used for echoing, hashing and
    serialization; ``internal`` mirrors it with quantities converted to
    rad/us / us / G.
    """

    protocol: str
    effective: dict
    internal: dict

    @property
    def run_id(self) -> str:
        text = json.dumps(self.effective, sort_keys=True, separators=(",", ":"))
        return hashlib.sha1(text.encode()).hexdigest()[:12]

    def register_config(self) -> RegisterConfig:
        sy = self.internal["system"]
        constants = PhysicalConstants(
            d=sy["zero_field_splitting"],
            gamma_e=sy["gamma_e"],
            gamma_c=sy["gamma_c"],
            mu0_prefactor=sy["dipolar_prefactor"],
        )
        carbons = tuple(
            CarbonParams(a_zz=c["a_zz"], a_ani=c["a_ani"], phi=c["phi"], t2n_star=c["t2n_star"])
            for c in sy["carbons"]
        )
        return RegisterConfig(
            constants=constants, carbons=carbons, d12=sy["d12"], t2e_star=sy["t2e_star"]
        )

    def dissipator_spec(self, cfg: RegisterConfig) -> DissipatorSpec:
        di = self.internal["dissipation"]
        if di["mode"] == "common":
            t2n = (di["t2n_common"],)
        else:
            t2n = tuple(c.t2n_star for c in cfg.carbons)
        return DissipatorSpec(mode=di["mode"], t2e_star=cfg.t2e_star, t2n_star=t2n)

    def integrator(self) -> IntegratorSettings:
        to = self.internal["tolerances"]
        return IntegratorSettings(
            rtol=to["rtol"],
            atol=to["atol"],
            max_step=to["max_step"],
            report_points=self.internal["output"]["report_points"],
        )

    @property
    def params(self) -> dict:
        return self.internal["protocol"]["params"]

    @property
    def output(self) -> dict:
        return self.internal["output"]

    @property
    def sweep_axes(self) -> list[dict]:
        return self.internal.get("sweep", {}).get("axes", [])


_TOP_SECTIONS = ("system", "dissipation", "protocol", "output", "tolerances", "sweep")


def parse_config(text: str | dict, protocol: str | None = None) -> RunConfig:
    """Parse and validate a config document.

    ``text`` is JSON text (or an already-decoded dict).  ``protocol``
    supplies the protocol name when the document omits it; a name present
    in both places must agree.
    """
    if isinstance(text, str):
        try:
            raw = json.loads(text) if text.strip() else {}
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    else:
        raw = copy.deepcopy(text)
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    for key in raw:
        if key not in _TOP_SECTIONS:
            raise ConfigError(f"{key}: unknown top-level section")

    proto_raw = raw.get("protocol", {})
    if not isinstance(proto_raw, dict):
        raise ConfigError("protocol: expected an object")
    for key in proto_raw:
        if key not in ("name", "params"):
            raise ConfigError(f"protocol.{key}: unknown key")
    name = proto_raw.get("name", protocol)
    if name is None:
        raise ConfigError("protocol.name: required (or pass a subcommand)")
    name = _convert(name, _KEYS["protocol.name"], "protocol.name")
    if protocol is not None and name != protocol:
        raise ConfigError(
            f"protocol.name: config says {name!r} but the subcommand is {protocol!r}"
        )

    internal = {
        "system": _convert_section(raw.get("system", {}), "system", "system"),
        "dissipation": _convert_section(raw.get("dissipation", {}), "dissipation", "dissipation"),
        "protocol": {
            "name": name,
            "params": _convert_section(
                proto_raw.get("params", {}), f"params.{name}", "protocol.params"
            ),
        },
        "output": _convert_section(raw.get("output", {}), "output", "output"),
        "tolerances": _convert_section(raw.get("tolerances", {}), "tolerances", "tolerances"),
        "sweep": _convert_section(raw.get("sweep", {}), "sweep", "sweep"),
    }
    effective = _render_effective(raw, internal, name)
    return RunConfig(protocol=name, effective=effective, internal=internal)


def _render_value(internal_value, spec: dict):
    """Render an internal value back to its canonical document form."""
    kind = spec["kind"]
    if internal_value is None:
        return None
    if kind in _QUANTITY_KINDS:
        # canonical unit: the unit used in the schema default when present,
        # else the natural internal-adjacent unit
        unit = None
        default = spec.get("default")
        if isinstance(default, str):
            unit = default.split()[1]
        if unit is None:
            unit = {"frequency": "MHz", "gyromagnetic": "MHz/G", "time": "us",
                    "field": "G", "ramp_rate": "G/us", "angle": "rad",
                    "distance": "nm"}[kind]
        factor = _UNIT_FACTORS[unit][1]
        return f"{internal_value / factor!r} {unit}"
    return internal_value


def _render_section(section: dict, prefix: str) -> dict:
    known = _section_keys(prefix)
    out = {}
    for key, spec in known.items():
        val = section[key]
        if spec["kind"] == "carbon_array":
            out[key] = [_render_section(item, "carbon") for item in val]
        elif spec["kind"] == "sweep_axes":
            out[key] = [_render_section(item, "axis") for item in val]
        else:
            out[key] = _render_value(val, spec)
    return out


def _render_effective(raw: dict, internal: dict, name: str) -> dict:
    return {
        "system": _render_section(internal["system"], "system"),
        "dissipation": _render_section(internal["dissipation"], "dissipation"),
        "protocol": {
            "name": name,
            "params": _render_section(internal["protocol"]["params"], f"params.{name}"),
        },
        "output": _render_section(internal["output"], "output"),
        "tolerances": _render_section(internal["tolerances"], "tolerances"),
        "sweep": _render_section(internal["sweep"], "sweep"),
    }


def serialize_config(cfg: RunConfig) -> str:
    """Canonical JSON rendering of the effective config (round-trips)."""
    return json.dumps(cfg.effective, indent=2, sort_keys=True) + "\n"
