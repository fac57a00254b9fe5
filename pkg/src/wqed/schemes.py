"""Emitter level schemes and their physical parameters.

All energies are angular frequencies with hbar = c = 1, so a photon of
wavenumber k carries energy k.  Decay rates into the waveguide (``Gamma*``)
are primitive inputs; couplings are never used directly.

Scheme letters follow the usual labelling of three-level configurations:

* ``TwoLevel``               -- bare two-level emitter
* ``DrivenLambda``      (A)  -- Lambda system, upper transition driven (EIT)
* ``LambdaTwoTransition`` (B) -- Lambda system, both legs couple to the guide
* ``DrivenV``           (C)  -- V system, ground states coupled by a drive
* ``VTwoTransition``    (D)  -- V system, both upper levels couple to the guide
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Union

from .errors import ConfigError


def _finite(name, value):
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {value!r}")


def _nonneg(name, value):
    _finite(name, value)
    if value < 0:
        raise ConfigError(f"{name} must be >= 0, got {value!r}")


def _positive(name, value):
    _finite(name, value)
    if value <= 0:
        raise ConfigError(f"{name} must be > 0, got {value!r}")


@dataclass(frozen=True)
class TwoLevel:
    omega0: float
    gamma: float
    Gamma: float

    kind = "two_level"

    def __post_init__(self):
        _finite("omega0", self.omega0)
        _nonneg("gamma", self.gamma)
        _positive("Gamma", self.Gamma)

    @property
    def lossless(self) -> bool:
        return self.gamma == 0


@dataclass(frozen=True)
class DrivenLambda:
    """Scheme A: level 1 at zero energy, drive couples |2> and |3>."""

    E2: float
    Delta: float
    Omega: float
    gamma2: float
    gamma3: float
    Gamma: float

    kind = "driven_lambda"

    def __post_init__(self):
        _finite("E2", self.E2)
        _finite("Delta", self.Delta)
        _nonneg("Omega", self.Omega)
        _nonneg("gamma2", self.gamma2)
        _nonneg("gamma3", self.gamma3)
        _positive("Gamma", self.Gamma)

    @property
    def lossless(self) -> bool:
        return self.gamma2 == 0 and self.gamma3 == 0

    @property
    def eit_frequency(self) -> float:
        return self.E2 - self.Delta


@dataclass(frozen=True)
class LambdaTwoTransition:
    """Scheme B: ground states |1>, |3> both decay from |2> into the guide."""

    E1: float
    E3: float
    E2: float
    gamma: float
    Gamma1: float
    Gamma3: float

    kind = "lambda_two"

    def __post_init__(self):
        for name in ("E1", "E3", "E2"):
            _finite(name, getattr(self, name))
        _nonneg("gamma", self.gamma)
        _positive("Gamma1", self.Gamma1)
        _positive("Gamma3", self.Gamma3)

    @property
    def lossless(self) -> bool:
        return self.gamma == 0


@dataclass(frozen=True)
class DrivenV:
    """Scheme C: drive mixes |1> and |3>; only |1> <-> |2> couples to the guide."""

    E2: float
    Delta: float
    Omega: float
    gamma: float
    Gamma: float

    kind = "driven_v"

    def __post_init__(self):
        _finite("E2", self.E2)
        _finite("Delta", self.Delta)
        # the dressed-state map is singular at Omega = 0
        _positive("Omega", self.Omega)
        _nonneg("gamma", self.gamma)
        _positive("Gamma", self.Gamma)

    @property
    def lossless(self) -> bool:
        return self.gamma == 0


@dataclass(frozen=True)
class VTwoTransition:
    """Scheme D: level 1 at zero energy, |2> and |3> both couple to the guide."""

    E2: float
    E3: float
    gamma2: float
    gamma3: float
    Gamma2: float
    Gamma3: float

    kind = "v_two"

    def __post_init__(self):
        _finite("E2", self.E2)
        _finite("E3", self.E3)
        for name in ("gamma2", "gamma3", "Gamma2", "Gamma3"):
            _nonneg(name, getattr(self, name))
        if not self.Gamma2 + self.Gamma3 > 0:
            raise ConfigError("Gamma2 + Gamma3 must be > 0")

    @property
    def lossless(self) -> bool:
        return self.gamma2 == 0 and self.gamma3 == 0


EmitterScheme = Union[TwoLevel, DrivenLambda, LambdaTwoTransition, DrivenV, VTwoTransition]
SingleChannelScheme = Union[TwoLevel, DrivenLambda, VTwoTransition]

SCHEMES = {
    cls.kind: cls
    for cls in (TwoLevel, DrivenLambda, LambdaTwoTransition, DrivenV, VTwoTransition)
}
# scheme letters accepted as aliases in configs
SCHEMES.update({"A": DrivenLambda, "B": LambdaTwoTransition, "C": DrivenV, "D": VTwoTransition})


def scheme_from_dict(data: dict) -> EmitterScheme:
    """Build a scheme from ``{"kind": ..., <params>}``; unknown keys are rejected."""
    data = dict(data)
    try:
        kind = data.pop("kind")
    except KeyError:
        raise ConfigError("scheme.kind is required") from None
    if kind not in SCHEMES:
        raise ConfigError(f"unknown scheme kind {kind!r}; expected one of {sorted(SCHEMES)}")
    cls = SCHEMES[kind]
    names = [f.name for f in fields(cls)]
    unknown = sorted(set(data) - set(names))
    if unknown:
        raise ConfigError(f"unknown field(s) for scheme {cls.kind!r}: {', '.join(unknown)}")
    missing = [n for n in names if n not in data]
    if missing:
        raise ConfigError(f"missing field(s) for scheme {cls.kind!r}: {', '.join(missing)}")
    values = {}
    for name in names:
        value = data[name]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"scheme.{name} must be a number, got {value!r}")
        values[name] = float(value)
    return cls(**values)


def scheme_to_dict(scheme: EmitterScheme) -> dict:
    return {"kind": scheme.kind, **asdict(scheme)}
