"""
Experiment configuration files.

A configuration is line-oriented text: ``key = value`` pairs, ``[section]``
headers, ``#`` comments and comma-separated lists. A ``#`` starts a comment
only at the start of a line or after whitespace, and never inside double
quotes. Top-level keys come before the first section. Every key is checked
against a schema; misspellings are errors, and defaults are applied only to
documented optional keys.

    experiment = diffusion
    seed = 7

    [register]
    preset = tmp

    [diffusion]
    d_const = 2.3e-9
    delta_small = 0.002
    delta_big = 0.1
    g_z = 0, 0.1, 0.2, 0.3
"""

import difflib
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from ..utils.constants import BACKENDS, EXPERIMENTS
from ..utils.errors import InvalidParameter, MissingRequired, ParseError, UnknownKey

log = logging.getLogger("starspin")

TOP_LEVEL = "top level"


class _Required:
    def __repr__(self) -> str:
        return "REQUIRED"


REQUIRED = _Required()


@dataclass(frozen=True)
class Key:
    """One schema entry: how to read the value and what to use when it is absent."""

    kind: str
    default: Any = None

    @property
    def required(self) -> bool:
        return self.default is REQUIRED


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected true or false, got '{text}'")


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        pass
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"expected an integer, got '{text}'")
    return int(value)


def _split(text: str) -> List[str]:
    items = [item.strip() for item in text.split(",")]
    if any(not item for item in items):
        raise ValueError(f"empty list entry in '{text}'")
    return items


_READERS: Dict[str, Callable[[str], Any]] = {
    "str": str,
    "int": _parse_int,
    "float": float,
    "bool": _parse_bool,
    "ints": lambda text: tuple(_parse_int(item) for item in _split(text)),
    "floats": lambda text: tuple(float(item) for item in _split(text)),
}

SCHEMAS: Dict[str, Dict[str, Key]] = {
    TOP_LEVEL: {
        "experiment": Key("str", REQUIRED),
        "seed": Key("int", 0),
        "backend": Key("str", "auto"),
        "output": Key("str", "results"),
        "jobs": Key("int", 1),
    },
    "register": {
        "preset": Key("str"),
        "n_total": Key("int"),
        "gamma_c": Key("float"),
        "gamma_a": Key("float"),
        "j_ca": Key("float"),
        "b0": Key("float"),
        "temperature": Key("float"),
        "t1_c": Key("float"),
        "t1_a": Key("float"),
        "label": Key("str"),
    },
    "spectrum": {
        "channel": Key("str", "central"),
        "input": Key("str", "thermal"),
        "exact": Key("bool", False),
    },
    "noon": {
        "input": Key("str", "thermal"),
    },
    "diffusion": {
        "d_const": Key("float", REQUIRED),
        "delta_small": Key("float", REQUIRED),
        "delta_big": Key("float", REQUIRED),
        "g_z": Key("floats", REQUIRED),
        "orders": Key("ints"),
        "trials": Key("int", 100_000),
    },
    "rfi": {
        "order": Key("int"),
        "dt_c": Key("float", REQUIRED),
        "n_c": Key("int", REQUIRED),
        "dt_a": Key("float", REQUIRED),
        "n_a": Key("int", REQUIRED),
        "mean_c": Key("float", REQUIRED),
        "sigma_c": Key("float", 0.0),
        "mean_a": Key("float", 0.0),
        "sigma_a": Key("float", 0.0),
    },
    "noise": {
        "kind": Key("str", "correlated"),
        "spectrum": Key("str", "lorentzian"),
        "sigma": Key("float"),
        "tau_c": Key("float"),
        "s0": Key("float"),
        "cross_correlation": Key("float", 1.0),
        "orders": Key("ints"),
        "tau": Key("floats", REQUIRED),
        "n_pulses": Key("int", 1),
        "t_max": Key("float", REQUIRED),
        "realizations": Key("int", 2000),
        "resolution": Key("int", 8),
    },
    "hbac": {
        "iterations": Key("int", 10),
        "tau_hb": Key("float", REQUIRED),
        "reset": Key("str", "exponential_t1"),
    },
    "qfi": {
        "n_values": Key("ints", REQUIRED),
        "epsilon_a": Key("float"),
        "theta0": Key("float", 0.5),
        "phi0": Key("float", 0.0),
        "copies": Key("int", 1),
    },
    "dtc": {
        "period": Key("float", 1e-3),
        "j_coupling": Key("float"),
        "errors": Key("floats", REQUIRED),
        "windows": Key("ints"),
        "taper": Key("str", "rect"),
        "n_periods": Key("int", 127),
        "observable": Key("str", "total"),
        "thermal": Key("bool", False),
        "disorder": Key("float", 0.0),
        "spectra": Key("bool", False),
    },
    "chaos": {
        "mode": Key("str", "map"),
        "k": Key("floats", REQUIRED),
        "grid": Key("int", 64),
        "j_ca": Key("float", 50.0),
        "n_kicks": Key("int", 200),
        "average_window": Key("int", 100),
        "theta": Key("float", math.pi / 2),
        "phi": Key("float", math.pi / 2),
        "ancilla_counts": Key("ints", (1, 2, 3, 4, 5, 6, 7, 8, 9)),
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment description (defaults applied)."""

    experiment: str
    register: Dict[str, Any] = field(default_factory=dict)
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    backend: str = "auto"
    output: str = "results"
    jobs: int = 1

    def validate(self) -> None:
        """
        Raises:
            InvalidParameter: If a top-level value is out of range
        """
        if self.experiment not in EXPERIMENTS:
            raise InvalidParameter(
                f"unknown experiment '{self.experiment}'; choose one of {', '.join(EXPERIMENTS)}"
            )
        if self.backend not in BACKENDS:
            raise InvalidParameter(f"backend must be one of {', '.join(BACKENDS)}, got '{self.backend}'")
        if self.seed < 0:
            raise InvalidParameter(f"seed must be a non-negative integer, got {self.seed}")
        if self.jobs < 1:
            raise InvalidParameter(f"jobs must be at least 1, got {self.jobs}")


def _suggest(key: str, candidates) -> Optional[str]:
    matches = difflib.get_close_matches(key, list(candidates), n=1, cutoff=0.6)
    return matches[0] if matches else None


def _strip_comment(line: str) -> str:
    """Drop a comment: '#' at the start of the line or after whitespace, outside double quotes."""
    quoted = False
    for index, char in enumerate(line):
        if char == '"':
            quoted = not quoted
        elif char == "#" and not quoted and (index == 0 or line[index - 1].isspace()):
            return line[:index].strip()
    return line.strip()


def _read_value(section: str, key: str, text: str, line: int) -> Any:
    schema = SCHEMAS[section]
    if key not in schema:
        raise UnknownKey(key, section, _suggest(key, schema))
    if len(text) >= 2 and text[0] == text[-1] == '"':
        text = text[1:-1]
    try:
        return _READERS[schema[key].kind](text)
    except ValueError as e:
        raise ParseError(f"bad value for '{key}' in [{section}]: {e}", line) from None


def _resolve(section: str, given: Dict[str, Any]) -> Dict[str, Any]:
    resolved = {}
    for key, spec in SCHEMAS[section].items():
        if key in given:
            resolved[key] = given[key]
        elif spec.required:
            raise MissingRequired(f"[{section}] is missing required key '{key}'")
        else:
            resolved[key] = spec.default
    return resolved


def parse_config(text: str) -> ExperimentConfig:
    """Strictly parse configuration text.

    Raises:
        ParseError: On malformed lines or values (with the line number)
        UnknownKey: On keys or sections no schema accepts
        MissingRequired: If a required key is absent
    """
    sections: Dict[str, Dict[str, Any]] = {TOP_LEVEL: {}}
    current = TOP_LEVEL
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(f"unterminated section header '{line}'", number)
            current = line[1:-1].strip()
            if current not in SCHEMAS or current == TOP_LEVEL:
                raise UnknownKey(current, "sections", _suggest(current, [s for s in SCHEMAS if s != TOP_LEVEL]))
            if current in sections:
                raise ParseError(f"section [{current}] appears twice", number)
            sections[current] = {}
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ParseError(f"expected 'key = value', got '{line}'", number)
        if not value:
            raise ParseError(f"key '{key}' has no value", number)
        if key in sections[current]:
            raise ParseError(f"key '{key}' given twice in [{current}]", number)
        sections[current][key] = _read_value(current, key, value, number)

    top = _resolve(TOP_LEVEL, sections[TOP_LEVEL])
    experiment = top["experiment"]
    if experiment not in EXPERIMENTS:
        suggestion = _suggest(experiment, EXPERIMENTS)
        hint = f" (did you mean '{suggestion}'?)" if suggestion else ""
        raise InvalidParameter(f"unknown experiment '{experiment}'{hint}")
    for name in sections:
        if name not in (TOP_LEVEL, "register", experiment):
            raise InvalidParameter(f"section [{name}] does not belong to experiment '{experiment}'")
    register = {key: value for key, value in sections.get("register", {}).items()}
    params = _resolve(experiment, sections.get(experiment, {}))
    config = ExperimentConfig(
        experiment=experiment,
        register=register,
        params=params,
        seed=top["seed"],
        backend=top["backend"],
        output=top["output"],
        jobs=top["jobs"],
    )
    config.validate()
    log.debug(f"parsed {experiment} config with {len(params)} parameters")
    return config


def _render_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ", ".join(_render_value(item) for item in value)
    text = str(value)
    if "#" in text or text != text.strip():
        return f'"{text}"'
    return text


def render_config(config: ExperimentConfig) -> str:
    """Text that ``parse_config`` maps back to an equal configuration."""
    lines = [
        f"experiment = {config.experiment}",
        f"seed = {config.seed}",
        f"backend = {config.backend}",
        f"output = {_render_value(config.output)}",
        f"jobs = {config.jobs}",
    ]
    for name, values in (("register", config.register), (config.experiment, config.params)):
        present = {key: value for key, value in values.items() if value is not None}
        if not present:
            continue
        lines.extend(["", f"[{name}]"])
        lines.extend(f"{key} = {_render_value(value)}" for key, value in present.items())
    return "\n".join(lines) + "\n"


def config_echo(config: ExperimentConfig) -> Dict[str, Any]:
    """Plain-type dictionary of the resolved configuration, for metadata files."""

    def plain(value: Any) -> Any:
        if isinstance(value, (tuple, list)):
            return [plain(item) for item in value]
        return value

    return {
        "experiment": config.experiment,
        "seed": config.seed,
        "backend": config.backend,
        "output": config.output,
        "jobs": config.jobs,
        "register": {key: plain(value) for key, value in config.register.items()},
        config.experiment: {key: plain(value) for key, value in config.params.items()},
    }
