"""Flat ``key = value`` run configuration.

One setting per line, ``#`` starts a comment. Degree distributions are
written ``degree_dist = 1:0.37, 2:0.33, 3:0.30``; lists are comma separated;
``auto`` leaves a coupled quantity (rho, intensity, population) derived.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Callable

from .abm import BELIEFS, EDGE_WEIGHTED
from .comparative import SWEEP_PARAMETERS
from .game import CLUSTER_CONVENTIONS
from .network import (
    INTENSITY_CONVENTIONS,
    DegreeDistribution,
    load_degree_distribution,
    load_tabulated_cost,
)
from .scenario import Scenario


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig(Scenario):
    x0: float = 0.3
    seed: int = 0
    seeds: int = 1
    # ABM population size; None uses n
    population: int | None = None
    abm_steps: int = 100
    belief: str = EDGE_WEIGHTED
    max_steps: int = 10_000
    horizon: float = 50.0
    dt: float = 0.05
    grid_points: int = 1001
    sweep_parameter: str | None = None
    sweep_values: tuple[float, ...] = ()
    couple: bool = True
    degree_file: str | None = None
    cost_file: str | None = None

    @property
    def abm_population(self) -> int:
        return self.n if self.population is None else self.population

    def degrees(self) -> DegreeDistribution:
        if self.degree_file is not None:
            return load_degree_distribution(self.degree_file)
        return self.degree_dist

    def cost_model(self):
        if self.cost_file is not None:
            return load_tabulated_cost(self.cost_file)
        return super().cost_model()


def _parse_bool(s: str) -> bool:
    low = s.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _parse_int(s: str) -> int:
    v = float(s)
    if not v.is_integer():
        raise ValueError(f"expected an integer, got {s!r}")
    return int(v)


def _optional(parse: Callable, none_word: str) -> Callable:
    return lambda s: None if s.lower() == none_word else parse(s)


def parse_degree_dist(s: str) -> DegreeDistribution:
    mapping = {}
    for item in s.split(","):
        item = item.strip()
        if not item:
            continue
        d, sep, p = item.partition(":")
        if not sep:
            raise ValueError(f"expected degree:probability, got {item!r}")
        mapping[_parse_int(d.strip())] = float(p)
    return DegreeDistribution.from_mapping(mapping)


def parse_float_list(s: str) -> tuple[float, ...]:
    out = []
    for item in s.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            out.append(float(item))
        except ValueError:
            raise ValueError(f"malformed value {item!r}") from None
    return tuple(out)


def _choice(options) -> Callable:
    def parse(s: str) -> str:
        if s not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {s!r}")
        return s
    return parse


def _fmt_float(v: float) -> str:
    return repr(float(v))


def _fmt_optional(fmt: Callable, none_word: str) -> Callable:
    return lambda v: none_word if v is None else fmt(v)


# key -> (parser, formatter, check) ; check returns an error message or None
_FLOAT = (float, _fmt_float)
_INT = (_parse_int, str)

_KEYS: dict[str, tuple] = {
    "n": (*_INT, lambda v: None if v >= 2 else "n must be >= 2"),
    "antennas": (*_INT, lambda v: None if v >= 1 else "antennas must be >= 1"),
    "degree_dist": (parse_degree_dist, lambda d: ", ".join(f"{k}:{p!r}" for k, p in zip(d.degrees, d.probs)), None),
    "region_size": (*_FLOAT, lambda v: None if v > 0 else "region_size must be positive"),
    "beta": (*_FLOAT, lambda v: None if 0 < v < 1 else "beta must lie in (0, 1)"),
    "alpha": (*_FLOAT, lambda v: None if v > 1 else "alpha must exceed 1"),
    "prop_const": (*_FLOAT, lambda v: None if v > 0 else "prop_const must be positive"),
    "comm_range": (*_FLOAT, lambda v: None if v > 0 else "comm_range must be positive"),
    "rho": (_optional(float, "auto"), _fmt_optional(_fmt_float, "auto"),
            lambda v: None if v is None or 0 <= v < 1 else "rho must lie in [0, 1)"),
    "delta_delta": (*_FLOAT, lambda v: None if v < 0 else "delta_delta must be negative"),
    "sigma": (*_FLOAT, lambda v: None if v > 0 else "sigma must be positive"),
    "intensity": (_optional(float, "auto"), _fmt_optional(_fmt_float, "auto"),
                  lambda v: None if v is None or v > 0 else "intensity must be positive"),
    "intensity_convention": (_choice(INTENSITY_CONVENTIONS), str, None),
    "cluster_convention": (_choice(CLUSTER_CONVENTIONS), str, None),
    "tolerance": (*_FLOAT, lambda v: None if 0 < v <= 1e-3 else "tolerance must satisfy 0 < eps <= 1e-3"),
    "x0": (*_FLOAT, lambda v: None if 0 < v <= 1 else "x0 must lie in (0, 1]"),
    "seed": (*_INT, None),
    "seeds": (*_INT, lambda v: None if v >= 1 else "seeds must be >= 1"),
    "population": (_optional(_parse_int, "auto"), _fmt_optional(str, "auto"),
                   lambda v: None if v is None or v >= 2 else "population must be >= 2"),
    "abm_steps": (*_INT, lambda v: None if v >= 1 else "abm_steps must be >= 1"),
    "belief": (_choice(BELIEFS), str, None),
    "max_steps": (*_INT, lambda v: None if v >= 1 else "max_steps must be >= 1"),
    "horizon": (*_FLOAT, lambda v: None if v > 0 else "horizon must be positive"),
    "dt": (*_FLOAT, lambda v: None if v > 0 else "dt must be positive"),
    "grid_points": (*_INT, lambda v: None if v >= 100 else "grid_points must be >= 100"),
    "sweep_parameter": (_optional(_choice(tuple(SWEEP_PARAMETERS)), "none"), _fmt_optional(str, "none"), None),
    "sweep_values": (parse_float_list, lambda vs: ", ".join(_fmt_float(v) for v in vs), None),
    "couple": (_parse_bool, lambda b: "true" if b else "false", None),
    "degree_file": (_optional(str, "none"), _fmt_optional(str, "none"), None),
    "cost_file": (_optional(str, "none"), _fmt_optional(str, "none"), None),
}

assert set(_KEYS) == {f.name for f in fields(RunConfig)}


def _convert(key: str, raw: str, where: str):
    if key not in _KEYS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    parse, _, check = _KEYS[key]
    try:
        value = parse(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: invalid value for {key!r}: {exc}") from None
    msg = check(value) if check else None
    if msg:
        raise ConfigError(f"{where}: {key}: {msg}")
    return value


def parse_config(text: str, source: str = "<config>", base: RunConfig | None = None) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        where = f"{source}:{lineno}"
        if not sep:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key = key.strip()
        values[key] = _convert(key, value.strip(), where)
    return replace(base or RunConfig(), **values)


def load_config(path: str | Path | None, overrides: list[str] | tuple[str, ...] = ()) -> RunConfig:
    if path is None:
        cfg = RunConfig()
    else:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {p}") from None
        except OSError as exc:
            raise ConfigError(f"cannot read config file {p}: {exc}") from None
        cfg = parse_config(text, str(p))
    return apply_overrides(cfg, overrides)


def apply_overrides(cfg: RunConfig, overrides) -> RunConfig:
    values = {}
    for i, item in enumerate(overrides, 1):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set #{i}: expected KEY=VALUE, got {item!r}")
        values[key.strip()] = _convert(key.strip(), value.strip(), f"--set {key.strip()}")
    return replace(cfg, **values)


def dump_config(cfg: RunConfig) -> str:
    lines = [f"{f.name} = {_KEYS[f.name][1](getattr(cfg, f.name))}" for f in fields(cfg)]
    return "\n".join(lines) + "\n"
