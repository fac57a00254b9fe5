"""Single-frequency scattering amplitudes for single-channel emitters.

Each emitter imprints a phase factor ``t`` on the even (symmetric) waveguide
mode; the odd mode passes untouched.  Transmission and reflection of the
left/right-moving fields follow from ``split_even_mode`` only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    DegenerateDenominatorError,
    GridPointError,
    NonphysicalAmplitudeError,
)
from .schemes import DrivenLambda, SingleChannelScheme, TwoLevel, VTwoTransition

UNIT_TOL = 1e-12
_TINY = 1e-300


@dataclass(frozen=True)
class ScatteringAmplitudes:
    t: complex
    r: complex
    loss: float

    @property
    def transmittance(self) -> float:
        return abs(self.t) ** 2

    @property
    def reflectance(self) -> float:
        return abs(self.r) ** 2


def _ratio(num: complex, den: complex) -> complex:
    if abs(den) < _TINY:
        raise DegenerateDenominatorError(
            f"vanishing denominator (|den| = {abs(den):.3g}, num = {num!r})"
        )
    return num / den


def _lorentz_phase(detuning: complex, width: float) -> complex:
    # (x - i w/2) / (x + i w/2), x may carry an imaginary loss part
    return _ratio(detuning - 0.5j * width, detuning + 0.5j * width)


def two_level_t(params: TwoLevel, omega: float) -> complex:
    """Even-mode phase factor of a two-level emitter at photon energy ``omega``."""
    x = omega - params.omega0 + 0.5j * params.gamma
    return _lorentz_phase(x, params.Gamma)


def split_even_mode(t: complex) -> ScatteringAmplitudes:
    """Map the even-mode phase factor onto waveguide transmission/reflection."""
    t = complex(t)
    if abs(t) > 1 + UNIT_TOL:
        raise NonphysicalAmplitudeError(f"|t| = {abs(t)!r} exceeds 1")
    tt = (t + 1) / 2
    rr = (t - 1) / 2
    return ScatteringAmplitudes(tt, rr, 1.0 - abs(tt) ** 2 - abs(rr) ** 2)


def driven_lambda_t(params: DrivenLambda, omega: float) -> complex:
    """Phase factor for the driven Lambda system (EIT configuration)."""
    p = params
    x2 = omega - p.E2 + 0.5j * p.gamma2
    coupling = p.Omega**2 / 4
    if coupling == 0:
        # the |3> factor cancels between numerator and denominator
        return _lorentz_phase(x2, p.Gamma)
    x3 = omega - (p.E2 - p.Delta) + 0.5j * p.gamma3
    num = x3 * (x2 - 0.5j * p.Gamma) - coupling
    den = x3 * (x2 + 0.5j * p.Gamma) - coupling
    return _ratio(num, den)


def v_two_transition_t(params: VTwoTransition, omega: float) -> complex:
    """Phase factor for the V system with both upper levels coupled to the guide."""
    p = params
    x2 = omega - p.E2 + 0.5j * p.gamma2
    x3 = omega - p.E3 + 0.5j * p.gamma3
    # a decoupled level drops out; avoids 0/0 on its own resonance
    if p.Gamma3 == 0:
        return _lorentz_phase(x2, p.Gamma2)
    if p.Gamma2 == 0:
        return _lorentz_phase(x3, p.Gamma3)
    cross = p.Gamma2 * p.Gamma3 / 4
    num = (x2 - 0.5j * p.Gamma2) * (x3 - 0.5j * p.Gamma3) - cross
    den = (x2 + 0.5j * p.Gamma2) * (x3 + 0.5j * p.Gamma3) - cross
    return _ratio(num, den)


_PHASE_FUNCTIONS = {
    TwoLevel: two_level_t,
    DrivenLambda: driven_lambda_t,
    VTwoTransition: v_two_transition_t,
}


def even_mode_t(scheme: SingleChannelScheme, omega: float) -> complex:
    """Dispatch to the closed form matching ``scheme``."""
    try:
        fn = _PHASE_FUNCTIONS[type(scheme)]
    except KeyError:
        raise TypeError(
            f"{type(scheme).__name__} scatters into two channels; "
            "use wqed.raman instead"
        ) from None
    return fn(scheme, omega)


def amplitudes(scheme: SingleChannelScheme, omega: float) -> ScatteringAmplitudes:
    return split_even_mode(even_mode_t(scheme, omega))


def check_grid(grid: Sequence[float], name: str = "grid") -> list[float]:
    values = [float(w) for w in grid]
    if not values:
        raise ValueError(f"{name} must be nonempty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return values


def spectrum(scheme: SingleChannelScheme, grid: Sequence[float]) -> list[ScatteringAmplitudes]:
    """Amplitudes on every point of a strictly increasing frequency grid."""
    out = []
    for i, omega in enumerate(check_grid(grid)):
        try:
            out.append(amplitudes(scheme, omega))
        except (DegenerateDenominatorError, NonphysicalAmplitudeError) as exc:
            raise GridPointError(i, omega, exc) from exc
    return out
