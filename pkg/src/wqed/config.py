"""Run configuration: parsing, validation and unit resolution.

Configs are TOML (or the JSON metadata sidecar written by a previous run).
Every frequency-like quantity is given in units of the reference frequency
``omega0`` and every length in units of ``lambda0 = 2*pi*c/omega0``.  Unknown
keys are rejected at every level.
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .errors import ConfigError
from .schemes import EmitterScheme, scheme_from_dict, scheme_to_dict

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

TASKS = ("spectrum", "switch-map", "bands", "dos", "localization", "xi-vs-drive")

# sections each task needs besides [scheme]
REQUIRED = {
    "spectrum": ("grid",),
    "switch-map": ("transistor",),
    "bands": ("grid", "lattice"),
    "dos": ("grid", "lattice"),
    "localization": ("grid", "disorder"),
    "xi-vs-drive": ("disorder", "drive"),
}
SEEDED = ("localization", "xi-vs-drive")


def _check_keys(section: str, data: dict, allowed, required=()):
    if not isinstance(data, dict):
        raise ConfigError(f"[{section}] must be a table")
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown field(s) in [{section}]: {', '.join(unknown)}")
    missing = [k for k in required if k not in data]
    if missing:
        raise ConfigError(f"missing field(s) in [{section}]: {', '.join(missing)}")


def _number(section, key, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{section}.{key} must be finite")
    return value


def _integer(section, key, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{section}.{key} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class GridSpec:
    """Either ``start``/``stop``/``num`` (inclusive linspace) or explicit ``values``."""

    start: Optional[float] = None
    stop: Optional[float] = None
    num: Optional[int] = None
    values: Optional[tuple] = None

    @classmethod
    def parse(cls, section: str, data) -> "GridSpec":
        if isinstance(data, list):
            data = {"values": data}
        _check_keys(section, data, ("start", "stop", "num", "values"))
        if "values" in data:
            if len(data) > 1:
                raise ConfigError(f"[{section}] takes either values or start/stop/num")
            values = tuple(_number(section, "values", v) for v in data["values"])
            if not values:
                raise ConfigError("grid must be nonempty")
            return cls(values=values)
        _check_keys(section, data, ("start", "stop", "num"), ("start", "stop", "num"))
        num = _integer(section, "num", data["num"])
        if num < 1:
            raise ConfigError("grid must be nonempty")
        start = _number(section, "start", data["start"])
        stop = _number(section, "stop", data["stop"])
        if num > 1 and not stop > start:
            raise ConfigError(f"[{section}] needs stop > start")
        return cls(start=start, stop=stop, num=num)

    def array(self, scale: float = 1.0) -> np.ndarray:
        if self.values is not None:
            raw = np.array(self.values, dtype=float)
        else:
            raw = np.linspace(self.start, self.stop, self.num)
        return raw * scale if scale != 1.0 else raw

    def to_dict(self):
        if self.values is not None:
            return {"values": list(self.values)}
        return {"start": self.start, "stop": self.stop, "num": self.num}


@dataclass(frozen=True)
class LatticeSection:
    d: float
    x0: float = 0.5
    broadening: Optional[float] = None

    @classmethod
    def parse(cls, data):
        _check_keys("lattice", data, ("d", "x0", "broadening"), ("d",))
        d = _number("lattice", "d", data["d"])
        if d <= 0:
            raise ConfigError("lattice.d must be > 0")
        x0 = _number("lattice", "x0", data.get("x0", 0.5))
        broadening = data.get("broadening")
        if broadening is not None:
            broadening = _number("lattice", "broadening", broadening)
            if broadening <= 0:
                raise ConfigError("lattice.broadening must be > 0")
        return cls(d, x0, broadening)

    def to_dict(self):
        out = {"d": self.d, "x0": self.x0}
        if self.broadening is not None:
            out["broadening"] = self.broadening
        return out


@dataclass(frozen=True)
class TransistorSection:
    gammas: GridSpec
    sigmas: GridSpec

    @classmethod
    def parse(cls, data):
        _check_keys("transistor", data, ("gammas", "sigmas"), ("gammas", "sigmas"))
        gammas = GridSpec.parse("transistor.gammas", data["gammas"])
        sigmas = GridSpec.parse("transistor.sigmas", data["sigmas"])
        if np.any(gammas.array() < 0):
            raise ConfigError("transistor.gammas must be >= 0")
        if np.any(sigmas.array() <= 0):
            raise ConfigError("transistor.sigmas must be > 0")
        return cls(gammas, sigmas)

    def to_dict(self):
        return {"gammas": self.gammas.to_dict(), "sigmas": self.sigmas.to_dict()}


@dataclass(frozen=True)
class DisorderSection:
    n_emitters: int
    n_realizations: int
    d_min: float
    d_max: float

    @classmethod
    def parse(cls, data):
        keys = ("n_emitters", "n_realizations", "d_min", "d_max")
        _check_keys("disorder", data, keys, keys)
        n_emitters = _integer("disorder", "n_emitters", data["n_emitters"])
        n_real = _integer("disorder", "n_realizations", data["n_realizations"])
        d_min = _number("disorder", "d_min", data["d_min"])
        d_max = _number("disorder", "d_max", data["d_max"])
        if n_emitters < 2:
            raise ConfigError("disorder.n_emitters must be >= 2")
        if n_real < 1:
            raise ConfigError("disorder.n_realizations must be >= 1")
        if not 0 < d_min <= d_max:
            raise ConfigError("need 0 < disorder.d_min <= disorder.d_max")
        return cls(n_emitters, n_real, d_min, d_max)

    def to_dict(self):
        return {
            "n_emitters": self.n_emitters,
            "n_realizations": self.n_realizations,
            "d_min": self.d_min,
            "d_max": self.d_max,
        }


@dataclass(frozen=True)
class DriveSection:
    omega: float
    Omega: GridSpec

    @classmethod
    def parse(cls, data):
        _check_keys("drive", data, ("omega", "Omega"), ("omega", "Omega"))
        rabis = GridSpec.parse("drive.Omega", data["Omega"])
        if np.any(rabis.array() < 0):
            raise ConfigError("drive.Omega must be >= 0")
        return cls(_number("drive", "omega", data["omega"]), rabis)

    def to_dict(self):
        return {"omega": self.omega, "Omega": self.Omega.to_dict()}


_SECTIONS = {
    "grid": lambda d: GridSpec.parse("grid", d),
    "lattice": LatticeSection.parse,
    "transistor": TransistorSection.parse,
    "disorder": DisorderSection.parse,
    "drive": DriveSection.parse,
}


@dataclass(frozen=True)
class RunConfig:
    task: str
    output: str
    scheme: EmitterScheme  # parameters in units of omega0
    omega0: float = 1.0
    seed: Optional[int] = None
    sections: dict = field(default_factory=dict)

    @property
    def wavelength(self) -> float:
        """lambda0 with c = 1."""
        return 2 * math.pi / self.omega0

    def __getattr__(self, name):
        sections = self.__dict__.get("sections", {})
        if name in _SECTIONS:
            if name not in sections:
                raise ConfigError(f"task {self.task!r} needs a [{name}] section")
            return sections[name]
        raise AttributeError(name)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"task": self.task, "output": self.output, "omega0": self.omega0}
        if self.seed is not None:
            out["seed"] = self.seed
        out["scheme"] = scheme_to_dict(self.scheme)
        for name in _SECTIONS:
            if name in self.sections:
                out[name] = self.sections[name].to_dict()
        return out


def parse_config(data: dict, task: Optional[str] = None, seed: Optional[int] = None) -> RunConfig:
    """Validate a raw config mapping; ``task``/``seed`` come from the command line."""
    data = dict(data)
    data.pop("meta", None)  # present in sidecars written by earlier runs
    allowed = ("task", "output", "omega0", "seed", "scheme", *_SECTIONS)
    _check_keys("top level", data, allowed, ("scheme",))

    cfg_task = data.get("task", task)
    if cfg_task is None:
        raise ConfigError("no task given")
    if task is not None and cfg_task != task:
        raise ConfigError(f"config is for task {cfg_task!r}, not {task!r}")
    if cfg_task not in TASKS:
        raise ConfigError(f"unknown task {cfg_task!r}; expected one of {', '.join(TASKS)}")

    output = data.get("output", cfg_task)
    if not isinstance(output, str) or not output or "/" in output or "\\" in output:
        raise ConfigError("output must be a plain file stem")

    omega0 = _number("top level", "omega0", data.get("omega0", 1.0))
    if omega0 <= 0:
        raise ConfigError("omega0 must be > 0")

    if seed is None and "seed" in data:
        seed = _integer("top level", "seed", data["seed"])
    if cfg_task in SEEDED:
        if seed is None:
            raise ConfigError(f"task {cfg_task!r} needs a seed")
        if not 0 <= seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
    else:
        seed = None

    if not isinstance(data["scheme"], dict):
        raise ConfigError("[scheme] must be a table")
    scheme = scheme_from_dict(data["scheme"])
    sections = {}
    for name in REQUIRED[cfg_task]:
        if name not in data:
            raise ConfigError(f"task {cfg_task!r} needs a [{name}] section")
    for name, parse in _SECTIONS.items():
        if name in data:
            sections[name] = parse(data[name])
    return RunConfig(cfg_task, output, scheme, omega0, seed, sections)


def load_config(path, task=None, seed=None) -> RunConfig:
    """Read a TOML config or a JSON sidecar from ``path``."""
    path = Path(path)
    raw = path.read_bytes()
    try:
        if path.suffix == ".json":
            data = json.loads(raw)
        else:
            data = tomllib.loads(raw.decode("utf-8"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a table")
    return parse_config(data, task, seed)
