"""JSON run configuration for the command line."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

from .errors import ConfigError
from .model import InputSignal, check_small_steps
from .systems import build_system, resolve_params

METHODS = ("fem", "smfe", "rk-ref", "reduced-fem")

_KEYS = {
    "system", "params", "method", "delta", "n_small", "delta_ref", "t_end",
    "initial_state", "output_path", "record_substeps", "record_every", "input",
}


class ConfigSyntaxError(ConfigError):
    def __init__(self, msg, line, column):
        self.line = line
        self.column = column
        super().__init__(f"config syntax error at line {line}, column {column}: {msg}")


class UnknownKeyError(ConfigError):
    pass


class MissingFieldError(ConfigError):
    def __init__(self, name, why=""):
        self.field = name
        super().__init__(f"missing required field {name!r}" + (f" ({why})" if why else ""))


@dataclass(frozen=True)
class RunConfig:
    system: str
    method: str = "smfe"
    params: dict = field(default_factory=dict)
    delta: Optional[float] = None
    n_small: Optional[int] = None
    delta_ref: Optional[float] = None
    t_end: float = 5.0
    initial_state: tuple = ()
    output_path: Optional[str] = None
    record_substeps: bool = False
    record_every: int = 1
    input: Optional[dict] = None

    def build(self):
        return build_system(self.system, self.params)

    def input_signal(self) -> Optional[InputSignal]:
        return input_from_dict(self.input)


def input_from_dict(doc: Optional[dict]) -> Optional[InputSignal]:
    if doc is None:
        return None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError("input must be an object with a 'kind' field")
    kind = doc["kind"]
    allowed = {"zero": {"kind", "dim"}, "constant": {"kind", "value"},
               "step": {"kind", "before", "after", "switch_time"}}
    if kind not in allowed:
        raise ConfigError(f"unknown input kind {kind!r}; expected zero, constant or step")
    extra = set(doc) - allowed[kind]
    if extra:
        raise UnknownKeyError(f"unknown key(s) {sorted(extra)} in {kind!r} input")
    try:
        if kind == "zero":
            return InputSignal.zero(int(doc.get("dim", 1)))
        if kind == "constant":
            return InputSignal.constant(doc["value"])
        return InputSignal.step(doc["before"], doc["after"], float(doc["switch_time"]))
    except KeyError as exc:
        raise MissingFieldError(f"input.{exc.args[0]}") from None


def _number(doc, key, kind=float, positive=True):
    value = doc.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key!r} must be a number, got {value!r}")
    if kind is int:
        if int(value) != value:
            raise ConfigError(f"{key!r} must be an integer, got {value!r}")
        value = int(value)
    else:
        value = float(value)
    if positive and not value > 0:
        raise ConfigError(f"{key!r} must be positive, got {value!r}")
    return value


def _normalize_param(value):
    if isinstance(value, bool):
        raise ConfigError("parameters must be numbers or nested lists of numbers")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, list):
        return [_normalize_param(v) for v in value]
    raise ConfigError(f"parameter value {value!r} is not a number or list")


def config_from_dict(doc: dict, analysis: bool = False) -> RunConfig:
    """Validate a decoded configuration and apply registry defaults.

    With ``analysis`` set the integrator-specific fields are optional:
    ``analyze`` needs only ``delta`` and falls back to the minimal ``N``.
    """
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = sorted(set(doc) - _KEYS)
    if unknown:
        raise UnknownKeyError(f"unknown configuration key(s): {unknown}; valid keys: {sorted(_KEYS)}")
    if "system" not in doc:
        raise MissingFieldError("system")
    method = doc.get("method", "smfe")
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; expected one of {METHODS}")

    params_in = doc.get("params") or {}
    if not isinstance(params_in, dict):
        raise ConfigError("'params' must be an object")
    params = {k: _normalize_param(v) for k, v in resolve_params(doc["system"], params_in).items()}
    built = build_system(doc["system"], params)

    delta = _number(doc, "delta")
    n_small = _number(doc, "n_small", int, positive=False)
    if n_small is not None and n_small < 0:
        raise ConfigError(f"'n_small' must be non-negative, got {n_small}")
    delta_ref = _number(doc, "delta_ref")
    t_end = _number(doc, "t_end")
    record_every = _number(doc, "record_every", int)
    if analysis:
        if delta is None:
            raise MissingFieldError("delta", "analysis")
    else:
        if method in ("fem", "smfe", "reduced-fem") and delta is None:
            raise MissingFieldError("delta", f"method {method!r}")
        if method == "smfe" and n_small is None:
            raise MissingFieldError("n_small", "method 'smfe'")
        if method == "rk-ref" and delta_ref is None:
            raise MissingFieldError("delta_ref", "method 'rk-ref'")
    if n_small is not None and method in ("smfe", "reduced-fem"):
        check_small_steps(n_small, built.system.epsilon)

    if "initial_state" in doc:
        x0 = doc["initial_state"]
        if not isinstance(x0, list) or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in x0):
            raise ConfigError("'initial_state' must be a list of numbers")
        x0 = tuple(float(v) for v in x0)
    else:
        x0 = tuple(float(v) for v in built.initial_state)
    allowed = {built.system.dim}
    if method == "reduced-fem" and built.reduced is not None:
        allowed.add(built.reduced.dim_slow)
    if len(x0) not in allowed:
        raise ConfigError(
            f"'initial_state' has length {len(x0)}, system {doc['system']!r} expects {sorted(allowed)}"
        )

    record_substeps = doc.get("record_substeps", False)
    if not isinstance(record_substeps, bool):
        raise ConfigError("'record_substeps' must be true or false")
    output_path = doc.get("output_path")
    if output_path is not None and not isinstance(output_path, str):
        raise ConfigError("'output_path' must be a string")
    input_spec = doc.get("input")
    input_from_dict(input_spec)

    return RunConfig(
        system=doc["system"],
        method=method,
        params=params,
        delta=delta,
        n_small=n_small,
        delta_ref=delta_ref,
        t_end=t_end if t_end is not None else float(built.t_end),
        initial_state=x0,
        output_path=output_path,
        record_substeps=record_substeps,
        record_every=record_every if record_every is not None else 1,
        input=input_spec,
    )


def parse_config(text: str, analysis: bool = False) -> RunConfig:
    """Parse and validate a JSON configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    return config_from_dict(doc, analysis)


def serialize_config(config: RunConfig) -> str:
    doc = {k: v for k, v in asdict(config).items() if v is not None}
    doc["initial_state"] = list(config.initial_state)
    return json.dumps(doc, indent=2, sort_keys=True)
