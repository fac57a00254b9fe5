"""Transfer matrices, Bloch bands and density of states of emitter arrays.

A cell is one emitter followed by free propagation over a distance ``d``.  The
2x2 transfer matrix maps the (right, left) moving amplitudes of one cell onto
the next.  For lossy cells its eigenvalues factor as
``exp(sigma*d) * exp(+-i*kappa*d)``; ``sigma`` is reported as the absorption
coefficient and ``kappa`` (or the evanescent attenuation inside a gap) is read
off the normalised matrix.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import GridPointError, NumericalError, PerfectReflectorError
from .scattering import ScatteringAmplitudes, amplitudes, check_grid
from .schemes import SingleChannelScheme

REFLECTOR_TOL = 1e-12
EIGEN_TOL = 1e-8
# Im(h) and |det T'| - 1 below this are rounding noise
_REAL_TRACE_TOL = 1e-10

INF_ATTENUATION = math.inf  # written as the literal "inf" in CSV output


@dataclass(frozen=True)
class BandPoint:
    omega: float
    kind: str  # "bloch" or "gap"
    kappa: float  # nan inside gaps
    attenuation: float  # nan inside bands, inf for perfect reflectors
    absorption_sigma: float

    @property
    def is_bloch(self) -> bool:
        return self.kind == "bloch"


def cell_transfer(amps: ScatteringAmplitudes, omega: float, d: float) -> np.ndarray:
    """Transfer matrix of one emitter plus a free section of length ``d``."""
    t, r = amps.t, amps.r
    if abs(t) <= REFLECTOR_TOL:
        raise PerfectReflectorError(f"|t| = {abs(t):.3g}: cell reflects everything")
    tc = t.conjugate()
    phase = cmath.exp(1j * omega * d)
    return np.array(
        [
            [phase / tc, -phase * r.conjugate() / tc],
            [-r / (phase * t), 1 / (phase * t)],
        ],
        dtype=complex,
    )


def eigenvalues(T: np.ndarray) -> tuple[complex, complex]:
    """Eigenvalues of a 2x2 matrix, larger modulus first (no cancellation)."""
    half_tr = (T[0, 0] + T[1, 1]) / 2
    det = T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]
    root = cmath.sqrt(half_tr * half_tr - det)
    big = half_tr + root if abs(half_tr + root) >= abs(half_tr - root) else half_tr - root
    small = det / big if big != 0 else 0j
    return big, small


def classify(T: np.ndarray, d: float, omega: float = math.nan) -> BandPoint:
    """Decide band or gap from the eigenvalues of ``T``.

    The common modulus ``sqrt|det T|`` is split off as the absorption factor.
    What remains is either a unimodular pair (Bloch state, ``kappa`` in
    ``[0, pi/d]``) or a real pair ``mu, 1/mu`` (gap).  Exact band edges are
    reported as Bloch states with ``kappa`` 0 or ``pi/d``.
    """
    T = np.asarray(T, dtype=complex)
    det = T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]
    scale = math.sqrt(abs(det))
    sigma = math.log(scale) / d
    h = (T[0, 0] + T[1, 1]) / (2 * scale)
    unit_det = det / scale**2
    if abs(h.imag) <= _REAL_TRACE_TOL * max(1.0, abs(h)) and abs(unit_det - 1) <= _REAL_TRACE_TOL:
        x = h.real
        if abs(x) <= 1:
            return BandPoint(omega, "bloch", math.acos(x) / d, math.nan, sigma)
        return BandPoint(omega, "gap", math.nan, math.acosh(abs(x)) / d, sigma)
    mu1, mu2 = (lam / scale for lam in eigenvalues(T))
    growth = math.log(abs(mu1))
    if growth <= _REAL_TRACE_TOL:
        return BandPoint(omega, "bloch", abs(cmath.phase(mu1)) / d, math.nan, sigma)
    return BandPoint(omega, "gap", math.nan, growth / d, sigma)


def band_point(scheme: SingleChannelScheme, omega: float, d: float) -> tuple[BandPoint, Optional[np.ndarray]]:
    amps = amplitudes(scheme, omega)
    try:
        T = cell_transfer(amps, omega, d)
    except PerfectReflectorError:
        return BandPoint(omega, "gap", math.nan, INF_ATTENUATION, 0.0), None
    point = classify(T, d, omega)
    if scheme.lossless:
        # det T = 1 analytically; drop the rounding residue
        point = replace(point, absorption_sigma=0.0)
    return point, T


def band_scan(scheme: SingleChannelScheme, d: float, omega_grid: Sequence[float]) -> list[BandPoint]:
    """Band/gap classification on every point of ``omega_grid``."""
    points = []
    for i, omega in enumerate(check_grid(omega_grid)):
        try:
            points.append(band_point(scheme, omega, d)[0])
        except NumericalError as exc:
            raise GridPointError(i, omega, exc) from exc
    return points


def count_gaps(points: Sequence[BandPoint]) -> int:
    """Number of maximal runs of consecutive gap points."""
    gaps, inside = 0, False
    for p in points:
        if not p.is_bloch and not inside:
            gaps += 1
        inside = not p.is_bloch
    return gaps


def bloch_vector(T: np.ndarray, kappa: float, d: float) -> np.ndarray:
    """Bloch eigenvector (a_R, a_L) for eigenvalue ``exp(i kappa d)`` of ``T``.

    ``T`` may be lossy; it is normalised by ``sqrt|det T|`` first.  The vector
    has unit norm with a_R real and non-negative (a_L when a_R vanishes).
    """
    T = np.asarray(T, dtype=complex)
    det = T[0, 0] * T[1, 1] - T[0, 1] * T[1, 0]
    Tn = T / math.sqrt(abs(det))
    lam = cmath.exp(1j * kappa * d)
    # backward error via the characteristic polynomial; the forward distance
    # to a root degrades to sqrt(eps) at band edges where the roots merge
    tr = Tn[0, 0] + Tn[1, 1]
    det_n = det / abs(det)
    residual = abs(lam * lam - tr * lam + det_n)
    if residual > EIGEN_TOL * (1 + abs(tr)):
        raise NumericalError(
            f"exp(i kappa d) = {lam:.6g} is not an eigenvalue of T (residual {residual:.3g})"
        )
    a = np.array([Tn[0, 1], lam - Tn[0, 0]])
    b = np.array([lam - Tn[1, 1], Tn[1, 0]])
    v = a if np.linalg.norm(a) >= np.linalg.norm(b) else b
    n = np.linalg.norm(v)
    if n == 0:
        # T' = lam * identity: every vector is an eigenvector
        v = np.array([1.0 + 0j, 0j])
    else:
        v = v / n
    i = 0 if abs(v[0]) > 1e-14 else 1
    v = v * (abs(v[i]) / v[i])
    v[i] = abs(v[i])  # exactly real, not just to rounding
    return v


def bloch_coupling(T: np.ndarray, kappa: float, omega: float, x0: float, d: float) -> complex:
    """Coupling of an emitter at ``x0`` (measured from the cell start) to a Bloch state."""
    a_r, a_l = bloch_vector(T, kappa, d)
    return a_r * cmath.exp(1j * omega * x0) + a_l * cmath.exp(-1j * omega * x0)


@dataclass(frozen=True)
class DosCurve:
    omega_grid: tuple
    density: tuple
    x0: float
    lossy: bool


def _dkappa_domega(omegas: np.ndarray, kappas: np.ndarray, bloch: np.ndarray) -> np.ndarray:
    """|d kappa / d omega| by finite differences inside each band.

    Centred where both neighbours are Bloch points, one-sided at band edges.
    """
    n = len(omegas)
    out = np.zeros(n)
    for i in np.flatnonzero(bloch):
        left = i > 0 and bloch[i - 1]
        right = i < n - 1 and bloch[i + 1]
        if left and right:
            lo, hi = i - 1, i + 1
        elif right:
            lo, hi = i, i + 1
        elif left:
            lo, hi = i - 1, i
        else:
            continue  # isolated Bloch point carries no measurable weight
        out[i] = abs(kappas[hi] - kappas[lo]) / (omegas[hi] - omegas[lo])
    return out


def _lorentz_moments(ua, ub, w):
    """Integrals of ``u**k * (w/pi) / (u**2 + w**2)`` over ``[ua, ub]``, k = 0..3.

    Differences of arctan/log are taken in cancellation-free form, which
    matters for segments far from the target where both ends are large.
    """
    same_side = ua * ub >= 0
    direct = np.arctan(ub / w) - np.arctan(ua / w)
    with np.errstate(divide="ignore", invalid="ignore"):
        combined = np.arctan(w * (ub - ua) / (w * w + ua * ub))
    m0 = np.where(same_side, combined, direct) / np.pi
    log_ratio = np.log1p((ub - ua) * (ub + ua) / (ua * ua + w * w))
    m1 = w * log_ratio / (2 * np.pi)
    m2 = w * (ub - ua) / np.pi - w * w * m0
    m3 = w * (ub - ua) * (ub + ua) / (2 * np.pi) - w * w * m1
    return m0, m1, m2, m3


def _lorentz_smear(omegas, weight, widths, bloch, targets):
    """Integrate ``weight * L_width(omega - target)`` over the Bloch bands.

    Inside each band ``weight`` is replaced by its monotone cubic (PCHIP)
    interpolant and the width is held constant per grid segment; the product
    with the unit-mass Lorentzian ``(w/pi) / (x^2 + w^2)`` is then integrated
    exactly.  A C1 interpolant matters: kinks of a piecewise-linear one bias
    the result by ~ w*log(h/w) even as w -> 0.
    """
    starts, coeffs, widths_seg, lefts, rights = [], [], [], [], []
    edges = np.flatnonzero(np.diff(np.concatenate(([0], bloch.astype(int), [0]))))
    for lo, hi in zip(edges[::2], edges[1::2]):
        if hi - lo < 2:
            continue  # a single Bloch point spans no frequency interval
        x = omegas[lo:hi]
        spline = PchipInterpolator(x, weight[lo:hi])
        coeffs.append(spline.c)
        lefts.append(x[:-1])
        rights.append(x[1:])
        w = 0.5 * (widths[lo:hi - 1] + widths[lo + 1:hi])
        # zero-width (transparent) points act as delta functions
        widths_seg.append(np.maximum(w, 1e-12 * (x[1:] - x[:-1])))
    out = np.zeros(len(targets))
    if not coeffs:
        return out
    c = np.concatenate(coeffs, axis=1)  # rows: cubic, quadratic, linear, const in (omega - a)
    a, b = np.concatenate(lefts), np.concatenate(rights)
    w = np.concatenate(widths_seg)
    for j, target in enumerate(targets):
        s = target - a
        # Taylor coefficients of each segment polynomial about the target
        t0 = ((c[0] * s + c[1]) * s + c[2]) * s + c[3]
        t1 = (3 * c[0] * s + 2 * c[1]) * s + c[2]
        t2 = 3 * c[0] * s + c[1]
        t3 = c[0]
        m0, m1, m2, m3 = _lorentz_moments(a - target, b - target, w)
        out[j] = np.sum(t0 * m0 + t1 * m1 + t2 * m2 + t3 * m3)
    return out


def density_of_states(
    scheme: SingleChannelScheme,
    d: float,
    x0: float,
    omega_grid: Sequence[float],
    broadening: Union[None, float, Callable[[float], float]] = None,
) -> DosCurve:
    """Density of states seen by an impurity emitter at ``x0`` (in units of d).

    Lossless cells give ``|chi|^2 |d kappa / d omega|``.  If the cells absorb,
    or ``broadening`` is given, every Bloch state is smeared by a Lorentzian of
    half width ``sigma(omega)`` (the absorption coefficient, or the override).
    Curves are unnormalised.
    """
    grid = np.array(check_grid(omega_grid))
    n = len(grid)
    kappas = np.zeros(n)
    sigmas = np.zeros(n)
    chi2 = np.zeros(n)
    bloch = np.zeros(n, dtype=bool)
    x_pos = x0 * d
    for i, omega in enumerate(grid):
        try:
            point, T = band_point(scheme, omega, d)
            sigmas[i] = point.absorption_sigma
            if point.is_bloch:
                bloch[i] = True
                kappas[i] = point.kappa
                chi2[i] = abs(bloch_coupling(T, point.kappa, omega, x_pos, d)) ** 2
        except NumericalError as exc:
            raise GridPointError(i, float(omega), exc) from exc

    smooth = chi2 * _dkappa_domega(grid, kappas, bloch)
    if broadening is None and scheme.lossless:
        return DosCurve(tuple(grid), tuple(smooth), x0, False)
    if broadening is not None:
        widths = np.array([broadening(w) if callable(broadening) else broadening for w in grid], dtype=float)
    else:
        widths = sigmas
    if np.any(widths[bloch] < 0) or not np.all(np.isfinite(widths[bloch])):
        raise NumericalError("Lorentzian broadening must be finite and non-negative")
    density = _lorentz_smear(grid, smooth, widths, bloch, grid) if n > 1 else smooth
    return DosCurve(tuple(grid), tuple(np.maximum(density, 0.0)), x0, True)


def lorentzian(x, width):
    """Unit-mass Lorentzian of half width ``width``."""
    return (width / np.pi) / (np.asarray(x) ** 2 + width**2)
