"""Switching probability of the driven-V single-photon transistor.

The emitter starts in the dressed state |+> (perfect preparation assumed).  A
gate photon flips it to |-> either coherently, through the Raman channel, or
incoherently, when the photon is lost and the excited state decays with
branching ratio 1/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .errors import ConfigError, GridPointError, QuadratureError
from .parallel import parallel_map
from .raman import dress, driven_v_tE
from .schemes import DrivenV

PULSE_HALF_WIDTH = 8.0  # integration window in units of sigma
QUAD_EPSABS = 1e-10
QUAD_MAX_ERROR = 1e-9

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class GaussianPulse:
    """Single-photon wavepacket with |f(k)|^2 a normal density of width ``sigma``."""

    omega_center: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ConfigError(f"pulse sigma must be > 0, got {self.sigma!r}")
        if not math.isfinite(self.omega_center):
            raise ConfigError("pulse omega_center must be finite")

    def amplitude(self, k):
        """f(k), normalised so that the integral of |f|^2 dk is one."""
        k = np.asarray(k, dtype=float)
        return (2 * math.pi * self.sigma**2) ** -0.25 * np.exp(
            -((k - self.omega_center) ** 2) / (4 * self.sigma**2)
        )

    def density(self, k):
        return np.abs(self.amplitude(k)) ** 2


@dataclass(frozen=True)
class SwitchResult:
    p_switch: float
    p_coherent: float
    p_loss_assisted: float


def resonant_frequency(v: DrivenV) -> float:
    """Photon energy that drives |+> resonantly to the excited level."""
    return v.E2 - dress(v).E_plus


def _integrate(fn, points):
    value, err, *info = quad(
        fn, -PULSE_HALF_WIDTH, PULSE_HALF_WIDTH,
        epsabs=QUAD_EPSABS, epsrel=QUAD_EPSABS, limit=500,
        points=points or None, full_output=1,
    )
    if len(info) > 1 or not err <= QUAD_MAX_ERROR:
        message = info[1] if len(info) > 1 else "error estimate too large"
        raise QuadratureError(f"quadrature did not converge (err={err:.3g}): {message}")
    return value


def pulse_norm(pulse: GaussianPulse) -> float:
    """Integral of |f(k)|^2 over the quadrature window (should be 1)."""
    return _integrate(lambda x: _INV_SQRT_2PI * math.exp(-0.5 * x * x), None)


def switching_probability(v: DrivenV, pulse: GaussianPulse) -> SwitchResult:
    """Probability that a gate photon leaves the emitter in |->.

    Integrates the pulse spectrum against the coherent Raman probability
    ``|tE - 1|^2 / 4`` and the loss-assisted flip ``(1 - |tE|^2) / 4``.  Both
    weights assume Gamma_+ = Gamma_-, so only ``Delta == 0`` is accepted.
    """
    if v.Delta != 0:
        raise ConfigError("switching probability is only defined for Delta = 0")
    basis = dress(v)
    center, sigma = pulse.omega_center, pulse.sigma

    def tE(x):
        return driven_v_tE(v, center + sigma * x, basis)

    def coherent(x):
        return _INV_SQRT_2PI * math.exp(-0.5 * x * x) * abs(tE(x) - 1) ** 2 / 4

    gamma_s = basis.Gamma_plus + basis.Gamma_minus
    half_width = 0.5 * (v.gamma + gamma_s)

    def lost(x):
        # 1 - |tE|^2 written without cancellation: gamma Gs / |delta + i(gamma + Gs)/2|^2
        delta = basis.E_plus + center + sigma * x - v.E2
        weight = v.gamma * gamma_s / (delta * delta + half_width * half_width)
        return _INV_SQRT_2PI * math.exp(-0.5 * x * x) * weight / 4

    x_res = (resonant_frequency(v) - center) / sigma
    points = [x_res] if abs(x_res) < PULSE_HALF_WIDTH else None
    p_coherent = _integrate(coherent, points)
    p_loss = _integrate(lost, points) if v.gamma > 0 else 0.0
    return SwitchResult(p_coherent + p_loss, p_coherent, p_loss)


@dataclass(frozen=True)
class SwitchMap:
    gammas: tuple
    sigmas: tuple
    results: tuple  # results[i][j] for gammas[i], sigmas[j]

    @property
    def p_switch(self) -> np.ndarray:
        return np.array([[r.p_switch for r in row] for row in self.results])

    def rows(self):
        for g, row in zip(self.gammas, self.results):
            for s, r in zip(self.sigmas, row):
                yield g, s, r


def switch_map(
    v_base: DrivenV,
    gammas: Sequence[float],
    sigmas: Sequence[float],
    threads: int = 1,
) -> SwitchMap:
    """Switching probability on the (loss rate, pulse width) grid.

    The pulse is always centred on the |+> resonance; ``v_base.gamma`` is
    overridden by each grid value.
    """
    gammas, sigmas = list(map(float, gammas)), list(map(float, sigmas))
    if not gammas or not sigmas:
        raise ConfigError("grid must be nonempty")
    if v_base.Delta != 0:
        raise ConfigError("switch maps are only defined for Delta = 0")
    center = resonant_frequency(v_base)
    cells = [(g, s) for g in gammas for s in sigmas]

    def evaluate(index):
        g, s = cells[index]
        try:
            return switching_probability(replace(v_base, gamma=g), GaussianPulse(center, s))
        except QuadratureError as exc:
            raise GridPointError(index, {"gamma": g, "sigma": s}, exc) from exc

    flat = parallel_map(evaluate, range(len(cells)), threads)
    n = len(sigmas)
    results = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(len(gammas)))
    return SwitchMap(tuple(gammas), tuple(sigmas), results)
