"""nu, delta and the conjugation function T.

    nu(s)    = -log(1 - |r(s)|^2) / (2 pi)
    delta(z) = exp(i int_{I(xi)} nu(s) / (s - z) ds)
    T(z)     = prod_k (z + i a_k) / (z - i a_k) * delta(z)

For xi > 2 the product runs over poles with kappa0 < a_k < 1/2 only.
Samples of r are interpolated with a cubic spline; nu is interpolated
monotonically in log(1 - |r|^2) so that it never dips below zero.  Both
vanish outside the sampled range.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from ._quadrature import cauchy
from .errors import DomainError
from .phase import Case, RegionInfo, select_j0


class _Interp:
    def __init__(self, spec):
        self.z = np.asarray(spec.z, float)
        self.zero = spec.reflectionless or self.z.size < 2
        if self.zero:
            return
        r = np.asarray(spec.r, complex)
        self.lo, self.hi = float(self.z[0]), float(self.z[-1])
        self._re = CubicSpline(self.z, r.real)
        self._im = CubicSpline(self.z, r.imag)
        self._lognu = PchipInterpolator(self.z, -np.log1p(-np.abs(r) ** 2) / (2 * np.pi))

    def r(self, s):
        s = np.asarray(s, float)
        if self.zero:
            return np.zeros(s.shape, complex)
        inside = (s >= self.lo) & (s <= self.hi)
        return np.where(inside, self._re(s) + 1j * self._im(s), 0.0)

    def nu(self, s):
        s = np.asarray(s, float)
        if self.zero:
            return np.zeros(s.shape)
        inside = (s >= self.lo) & (s <= self.hi)
        return np.where(inside, np.maximum(self._lognu(s), 0.0), 0.0)


def _interp(spec) -> _Interp:
    cached = spec.__dict__.get("_interp_cache")
    if cached is None or cached[0] is not spec.r:
        cached = (spec.r, _Interp(spec))
        spec.__dict__["_interp_cache"] = cached
    return cached[1]


def reflection(spec, s):
    return _interp(spec).r(s)


def nu(spec, s):
    """-(1/2pi) log(1 - |r(s)|^2); raises if the interpolated |r| reaches 1."""
    it = _interp(spec)
    if np.any(np.abs(it.r(s)) >= 1):
        raise DomainError("|r(s)| >= 1: nu is undefined")
    out = it.nu(s)
    return out[()] if np.ndim(out) == 0 else out


def nu_exact(r):
    """nu from a reflection value, without interpolation."""
    r2 = np.abs(r) ** 2
    if np.any(r2 >= 1):
        raise DomainError("|r| >= 1: nu is undefined")
    return -np.log1p(-r2) / (2 * np.pi)


def _clipped_intervals(spec, info: RegionInfo):
    it = _interp(spec)
    if it.zero:
        return []
    out = []
    for lo, hi in info.intervals:
        lo, hi = max(lo, it.lo), min(hi, it.hi)
        if hi > lo:
            out.append((lo, hi))
    return out


def log_delta(spec, info: RegionInfo, z, side: int = 0) -> complex:
    """i int_I nu/(s - z); boundary values on I via side = +1 (from above) / -1."""
    it = _interp(spec)
    z = complex(z)
    total = 0j
    for lo, hi in _clipped_intervals(spec, info):
        total += cauchy(it.nu, lo, hi, z, knots=it.z, side=side)
    return 1j * total


def delta(spec, info: RegionInfo, z, side: int = 0) -> complex:
    return complex(np.exp(log_delta(spec, info, z, side)))


def blaschke_heights(spec, info: RegionInfo, exclude_j0: bool = False):
    heights = [p.a for p in spec.poles]
    if info.case is Case.I:
        keep = [j for j, a in enumerate(heights) if info.kappa0 < a < 0.5]
    else:
        keep = list(range(len(heights)))
    if exclude_j0:
        j0 = info.j0 if info.j0 is not None else select_j0(spec, info)
        keep = [j for j in keep if j != j0]
    return [heights[j] for j in keep]


def blaschke(heights, z) -> complex:
    z = complex(z)
    out = 1.0 + 0j
    for a in heights:
        if z == 1j * a:
            raise DomainError("T evaluated at one of its poles")
        out *= (z + 1j * a) / (z - 1j * a)
    return out


def T(spec, info: RegionInfo, z, side: int = 0, exclude_j0: bool = False) -> complex:
    return blaschke(blaschke_heights(spec, info, exclude_j0), z) * delta(spec, info, z, side)


def T_expansion(spec, info: RegionInfo, exclude_j0: bool = False):
    """(T(i/2), T1) with T1 = T'(i/2) / T(i/2)."""
    z = 0.5j
    heights = blaschke_heights(spec, info, exclude_j0)
    T_half = T(spec, info, z, exclude_j0=exclude_j0)
    T1 = sum(2j * a / (0.25 - a * a) for a in heights) + 0j
    it = _interp(spec)
    for lo, hi in _clipped_intervals(spec, info):
        T1 += 1j * cauchy(it.nu, lo, hi, z, knots=it.z, power=2)
    return T_half, T1


# ------------------------------------------------------------- local limits


@dataclass(frozen=True)
class LocalLimit:
    """Behaviour of T near a stationary point xi_k.

    At a right endpoint of I(xi) (I to the left)
        T(z) ~ T_k (z - xi_k)^{i nu_k},
    at a left endpoint
        T(z) ~ T_k (xi_k - z)^{-i nu_k}.
    T_k = prod (xi_k + i a)/(xi_k - i a) * exp(i beta(xi_k)) is unimodular.
    """

    label: int
    xi_k: float
    nu_k: float
    Tk: complex
    side: str
    h: float

    def power(self, z) -> complex:
        z = complex(z)
        if self.side == "right":
            return complex(np.exp(1j * self.nu_k * np.log(z - self.xi_k)))
        return complex(np.exp(-1j * self.nu_k * np.log(self.xi_k - z)))


def _beta(spec, info, label, z, exclude_j0=False):
    it = _interp(spec)
    xk = info.points[label]
    side = info.endpoint_side(label)
    h = min(1.0, 0.5 * info.adjoining_length(label))
    nk = float(it.nu(np.array([xk]))[0])
    z = complex(z)
    total = 0j
    if side == "right":
        chi = (xk - h, xk)
        lead = -nk * np.log(z - xk + h)
    else:
        chi = (xk, xk + h)
        lead = nk * np.log(xk + h - z)
    shifted = lambda s: it.nu(s) - nk
    for lo, hi in _clipped_intervals(spec, info):
        pieces = []
        if lo < chi[1] and hi > chi[0]:
            cut_lo, cut_hi = max(lo, chi[0]), min(hi, chi[1])
            if cut_lo > lo:
                pieces.append((lo, cut_lo, it.nu))
            pieces.append((cut_lo, cut_hi, shifted))
            if hi > cut_hi:
                pieces.append((cut_hi, hi, it.nu))
        else:
            pieces.append((lo, hi, it.nu))
        for a, b, f in pieces:
            total += cauchy(f, a, b, z, knots=it.z)
    # nu vanishes beyond the sampled range, so the constant nk must be
    # removed from any part of chi that the clipping dropped
    if nk != 0:
        for lo, hi in ((chi[0], min(chi[1], it.lo)), (max(chi[0], it.hi), chi[1])):
            if hi > lo:
                total += cauchy(lambda s: -nk + 0 * s, lo, hi, z)
    return complex(lead + total), side, h, nk


def beta(spec, info: RegionInfo, label: int, z) -> complex:
    return _beta(spec, info, label, z)[0]


def local_limit(spec, info: RegionInfo, label: int, exclude_j0: bool = False) -> LocalLimit:
    if label not in info.points:
        raise DomainError(f"no real stationary point with label {label} for xi = {info.xi}")
    xk = info.points[label]
    b, side, h, nk = _beta(spec, info, label, xk)
    Tk = blaschke(blaschke_heights(spec, info, exclude_j0), xk) * np.exp(1j * b)
    return LocalLimit(label, xk, nk, complex(Tk), side, h)


@dataclass
class WeightEval:
    T_at_i_half: complex
    T1: complex
    local: dict = field(default_factory=dict)


def evaluate_weights(spec, info: RegionInfo, exclude_j0: bool = False) -> WeightEval:
    Th, T1 = T_expansion(spec, info, exclude_j0)
    local = {k: local_limit(spec, info, k, exclude_j0) for k in info.points}
    return WeightEval(Th, T1, local)
