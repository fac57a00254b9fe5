"""Two-channel (elastic + Raman sideband) scattering.

A Lambda system whose two legs both couple to the waveguide scatters an
incoming photon either back into the same emitter ground state (elastic) or,
with the emitter flipped, into a sideband shifted by the ground-state
splitting.  The driven V system reduces to the same structure once written in
the basis of its dressed ground states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .schemes import DrivenV, LambdaTwoTransition


@dataclass(frozen=True)
class RamanRow:
    """Outgoing amplitudes for one pure initial emitter state.

    ``k_out`` is the wavenumber of the Raman photon, fixed by energy
    conservation ``k_in + E_initial = k_out + E_final``.
    """

    initial: str
    elastic: complex
    raman: complex
    k_in: float
    k_out: float

    @property
    def norm2(self) -> float:
        return abs(self.elastic) ** 2 + abs(self.raman) ** 2


@dataclass(frozen=True)
class RamanSMatrix:
    a_elastic_from_lower: complex
    a_raman_from_lower: complex
    a_elastic_from_upper: complex
    a_raman_from_upper: complex
    q: float

    @classmethod
    def from_rows(cls, lower: RamanRow, upper: RamanRow, q: float) -> "RamanSMatrix":
        return cls(lower.elastic, lower.raman, upper.elastic, upper.raman, q)


@dataclass(frozen=True)
class DressedBasis:
    E_plus: float
    E_minus: float
    Gamma_plus: float
    Gamma_minus: float
    q: float
    Omega_eff: float


def _phase(detuning: float, gamma: float, gamma_total: float) -> complex:
    x = detuning + 0.5j * gamma
    return (x - 0.5j * gamma_total) / (x + 0.5j * gamma_total)


def lambda_tE(params: LambdaTwoTransition, E_total: float) -> complex:
    """Phase factor of the coupled (bright) channel at total energy ``E_total``."""
    return _phase(E_total - params.E2, params.gamma, params.Gamma1 + params.Gamma3)


def _channel_row(initial, tE, g_stay, g_other, k, k_out) -> RamanRow:
    total = g_stay + g_other
    elastic = (tE * g_stay + g_other) / total
    raman = math.sqrt(g_stay * g_other) * (tE - 1) / total
    return RamanRow(initial, elastic, raman, k, k_out)


def lambda_scatter(params: LambdaTwoTransition, k: float, initial_state: str) -> RamanRow:
    """Scatter a photon of wavenumber ``k`` off the emitter prepared in |1> or |3>.

    ``initial_state`` is ``"lower"`` for |1> and ``"upper"`` for |3>.
    """
    p = params
    q = p.E3 - p.E1
    if initial_state == "lower":
        tE = lambda_tE(p, p.E1 + k)
        return _channel_row("lower", tE, p.Gamma1, p.Gamma3, k, k - q)
    if initial_state == "upper":
        tE = lambda_tE(p, p.E3 + k)
        return _channel_row("upper", tE, p.Gamma3, p.Gamma1, k, k + q)
    raise ValueError(f"initial_state must be 'lower' or 'upper', got {initial_state!r}")


def lambda_smatrix(params: LambdaTwoTransition, k: float) -> RamanSMatrix:
    return RamanSMatrix.from_rows(
        lambda_scatter(params, k, "lower"),
        lambda_scatter(params, k, "upper"),
        params.E3 - params.E1,
    )


def dress(params: DrivenV) -> DressedBasis:
    """Diagonalise the driven ground-state manifold of the V system."""
    Omega, Delta, Gamma = params.Omega, params.Delta, params.Gamma
    if not Omega > 0:
        raise ConfigError("dressed basis requires Omega > 0")
    omega_eff = math.hypot(Omega, Delta)
    # Omega_eff -/+ Delta loses all digits when |Delta| >> Omega; use
    # (Omega_eff - |Delta|)(Omega_eff + |Delta|) = Omega**2 instead.
    big = omega_eff + abs(Delta)
    small = Omega**2 / big
    minus_delta, plus_delta = (small, big) if Delta >= 0 else (big, small)
    Gamma_plus = Gamma * Omega**2 / (2 * omega_eff * minus_delta)
    Gamma_minus = Gamma * Omega**2 / (2 * omega_eff * plus_delta)
    E_plus = -Delta / 2 + omega_eff / 2
    E_minus = -Delta / 2 - omega_eff / 2
    return DressedBasis(E_plus, E_minus, Gamma_plus, Gamma_minus, E_minus - E_plus, omega_eff)


def driven_v_scatter(params: DrivenV, k: float, initial_state: str) -> RamanRow:
    """Scatter off the driven V system prepared in dressed state ``plus``/``minus``."""
    basis = dress(params)
    Gp, Gm = basis.Gamma_plus, basis.Gamma_minus
    if initial_state == "plus":
        energy, stay, other, k_out = basis.E_plus, Gp, Gm, k - basis.q
    elif initial_state == "minus":
        energy, stay, other, k_out = basis.E_minus, Gm, Gp, k + basis.q
    else:
        raise ValueError(f"initial_state must be 'plus' or 'minus', got {initial_state!r}")
    detuning = (energy + k) - params.E2
    tE = _phase(detuning, params.gamma, Gp + Gm)
    return _channel_row(initial_state, tE, stay, other, k, k_out)


def driven_v_tE(params: DrivenV, k: float, basis: DressedBasis | None = None) -> complex:
    """Bright-channel phase factor for a photon hitting the emitter in |+>."""
    basis = basis or dress(params)
    detuning = (basis.E_plus + k) - params.E2
    return _phase(detuning, params.gamma, basis.Gamma_plus + basis.Gamma_minus)


def driven_v_smatrix(params: DrivenV, k: float) -> RamanSMatrix:
    return RamanSMatrix.from_rows(
        driven_v_scatter(params, k, "plus"),
        driven_v_scatter(params, k, "minus"),
        dress(params).q,
    )


def equivalent_lambda(params: DrivenV) -> LambdaTwoTransition:
    """The scheme-B emitter with the dressed energies and rates of ``params``."""
    b = dress(params)
    return LambdaTwoTransition(
        E1=b.E_plus, E3=b.E_minus, E2=params.E2, gamma=params.gamma,
        Gamma1=b.Gamma_plus, Gamma3=b.Gamma_minus,
    )
