"""Anderson localization in arrays of emitters with random spacings.

The inverse localization length of one realization is read from the largest
eigenvalue modulus of the full-array transfer matrix,
``|lambda_max| = exp(N * d_mean / xi)``.  The product of N cell matrices is
accumulated with a running scalar renormalisation (log of the scale kept
separately) so nothing overflows near resonances; rescaling by a scalar leaves
the eigenvectors alone and shifts every log-eigenvalue by the same amount.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ConfigError, GridPointError, NumericalError
from .lattice import REFLECTOR_TOL, cell_transfer
from .parallel import parallel_map
from .scattering import ScatteringAmplitudes, amplitudes, check_grid
from .schemes import DrivenLambda, SingleChannelScheme

INF_INV_XI = math.inf  # sentinel for perfectly reflecting cells


@dataclass(frozen=True)
class DisorderSpec:
    """Ensemble of arrays with spacings uniform in ``[d_min, d_max] * lambda0``."""

    n_emitters: int
    n_realizations: int
    d_min: float
    d_max: float
    seed: int

    def __post_init__(self):
        if self.n_emitters < 2:
            raise ConfigError("n_emitters must be >= 2")
        if self.n_realizations < 1:
            raise ConfigError("n_realizations must be >= 1")
        if not 0 < self.d_min <= self.d_max:
            raise ConfigError("need 0 < d_min <= d_max")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    @property
    def d_mean(self) -> float:
        return 0.5 * (self.d_min + self.d_max)


@dataclass(frozen=True)
class LocalizationEstimate:
    omega: float
    inv_xi_mean: float
    inv_xi_stderr: float
    n_divergent: int


def realization_rng(seed: int, realization: int) -> np.random.Generator:
    """Counter-based stream for one realization (Philox keyed by seed and index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, realization])))


def draw_spacings(spec: DisorderSpec, wavelength: float) -> np.ndarray:
    """Spacing table of shape ``(n_realizations, n_emitters)`` in absolute length."""
    rows = [
        realization_rng(spec.seed, r).uniform(spec.d_min, spec.d_max, spec.n_emitters)
        for r in range(spec.n_realizations)
    ]
    return np.array(rows) * wavelength


def _require_lossless(scheme):
    if not scheme.lossless:
        raise ConfigError("disordered arrays are treated for lossless emitters only")


def _log_lambda_max(amps: ScatteringAmplitudes, omega: float, spacings: np.ndarray) -> np.ndarray:
    """log|lambda_max(T_N)| for each row of ``spacings`` (shape ``(R, N)``)."""
    t, r = amps.t, amps.r
    # phase-free part of the cell matrix, shared by all cells at this frequency
    core = np.array([[1 / t.conjugate(), -r.conjugate() / t.conjugate()], [-r / t, 1 / t]])
    phases = np.exp(1j * omega * spacings)  # (R, N)
    R, N = spacings.shape
    M = np.broadcast_to(np.eye(2, dtype=complex), (R, 2, 2)).copy()
    log_scale = np.zeros(R)
    for j in range(N):
        p = phases[:, j]
        # T_j @ M with T_j = diag(p, 1/p) @ core
        top = core[0, 0] * M[:, 0, :] + core[0, 1] * M[:, 1, :]
        bottom = core[1, 0] * M[:, 0, :] + core[1, 1] * M[:, 1, :]
        M[:, 0, :] = p[:, None] * top
        M[:, 1, :] = bottom / p[:, None]
        norm = np.abs(M).max(axis=(1, 2))
        M /= norm[:, None, None]
        log_scale += np.log(norm)
    # det T_j = |core det| * 1; lossless cells give 1, so det M = exp(-2 log_scale)
    cell_det = core[0, 0] * core[1, 1] - core[0, 1] * core[1, 0]
    det_M = np.exp(N * np.log(cell_det + 0j) - 2 * log_scale)
    half_tr = 0.5 * (M[:, 0, 0] + M[:, 1, 1])
    root = np.sqrt(half_tr * half_tr - det_M)
    big = np.maximum(np.abs(half_tr + root), np.abs(half_tr - root))
    return log_scale + np.log(big)


def realization_inv_xi(
    scheme: SingleChannelScheme,
    spacings: Sequence[float],
    omega: float,
    d_mean: float | None = None,
) -> float:
    """Inverse localization length of one array (spacings in absolute length).

    ``d_mean`` defaults to the sample mean of ``spacings``.
    """
    _require_lossless(scheme)
    d = np.asarray(spacings, dtype=float)
    if d.ndim != 1 or d.size == 0 or np.any(d <= 0):
        raise ConfigError("spacings must be a nonempty list of positive lengths")
    amps = amplitudes(scheme, omega)
    if abs(amps.t) <= REFLECTOR_TOL:
        return INF_INV_XI
    log_lam = _log_lambda_max(amps, omega, d[None, :])[0]
    return max(log_lam, 0.0) / (d.size * (d.mean() if d_mean is None else d_mean))


def power_iteration_inv_xi(
    scheme: SingleChannelScheme,
    spacings: Sequence[float],
    omega: float,
    sweeps: int = 400,
    burn_in: int = 100,
) -> float:
    """Same quantity from the growth of a vector pushed repeatedly through the array.

    Never forms the product matrix and never diagonalises anything: the vector
    is propagated cell by cell, renormalised after each cell, and the mean log
    growth per full sweep (after ``burn_in`` sweeps) converges to
    ``log|lambda_max|``.
    """
    _require_lossless(scheme)
    d = np.asarray(spacings, dtype=float)
    amps = amplitudes(scheme, omega)
    if abs(amps.t) <= REFLECTOR_TOL:
        return INF_INV_XI
    cells = [cell_transfer(amps, omega, dj) for dj in d]
    v = np.array([1.0, 0.5 + 0.25j])
    v /= np.linalg.norm(v)
    growth = 0.0
    for sweep in range(sweeps):
        log_norm = 0.0
        for T in cells:
            v = T @ v
            n = np.linalg.norm(v)
            v /= n
            log_norm += math.log(n)
        if sweep >= burn_in:
            growth += log_norm
    rate = growth / (sweeps - burn_in)
    return max(rate, 0.0) / (d.size * d.mean())


def _estimate(omega, values):
    finite = values[np.isfinite(values)]
    n_div = int(values.size - finite.size)
    if finite.size == 0:
        return LocalizationEstimate(omega, INF_INV_XI, 0.0, n_div)
    mean = float(finite.mean())
    stderr = float(finite.std(ddof=1) / math.sqrt(finite.size)) if finite.size > 1 else 0.0
    return LocalizationEstimate(omega, mean, stderr, n_div)


def _ensemble(scheme, spacings, omega, d_mean):
    amps = amplitudes(scheme, omega)
    R, N = spacings.shape
    if abs(amps.t) <= REFLECTOR_TOL:
        return np.full(R, INF_INV_XI)
    log_lam = _log_lambda_max(amps, omega, spacings)
    return np.maximum(log_lam, 0.0) / (N * d_mean)


def localization_spectrum(
    scheme: SingleChannelScheme,
    spec: DisorderSpec,
    omega_grid: Sequence[float],
    wavelength: float = 2 * math.pi,
    threads: int = 1,
) -> list[LocalizationEstimate]:
    """Ensemble-averaged inverse localization length on a frequency grid.

    The same ``n_realizations`` arrays (drawn from ``spec.seed``) are probed at
    every frequency.  ``wavelength`` is the reference length lambda0 the
    spacings in ``spec`` are measured in; the localization length is expressed
    through the nominal mean spacing ``spec.d_mean * wavelength``.
    """
    _require_lossless(scheme)
    grid = check_grid(omega_grid)
    spacings = draw_spacings(spec, wavelength)

    def one(i):
        try:
            values = _ensemble(scheme, spacings, grid[i], spec.d_mean * wavelength)
        except NumericalError as exc:
            raise GridPointError(i, grid[i], exc) from exc
        return _estimate(grid[i], values)

    return parallel_map(one, range(len(grid)), threads)


def xi_vs_drive(
    scheme_base: DrivenLambda,
    spec: DisorderSpec,
    omega: float,
    omega_grid_for_Omega: Sequence[float],
    wavelength: float = 2 * math.pi,
    threads: int = 1,
) -> list[LocalizationEstimate]:
    """Inverse localization length at fixed photon frequency versus Rabi frequency.

    The ``omega`` field of each returned estimate holds the Rabi frequency.
    """
    _require_lossless(scheme_base)
    rabis = [float(x) for x in omega_grid_for_Omega]
    if not rabis:
        raise ConfigError("grid must be nonempty")
    if any(x < 0 for x in rabis):
        raise ConfigError("Rabi frequencies must be >= 0")
    spacings = draw_spacings(spec, wavelength)

    def one(i):
        scheme = replace(scheme_base, Omega=rabis[i])
        try:
            values = _ensemble(scheme, spacings, omega, spec.d_mean * wavelength)
        except NumericalError as exc:
            raise GridPointError(i, rabis[i], exc) from exc
        return _estimate(rabis[i], values)

    return parallel_map(one, range(len(rabis)), threads)
