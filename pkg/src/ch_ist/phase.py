"""Phase function, stationary points and the four-way ray classification.

The oscillatory factor of the jump is ``exp(2 i t theta(z))`` with

    theta(z; xi) = z * (xi - 2 / (1 + 4 z^2)),     xi = y / t.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import DomainError

BOUNDARY_RAYS = (-0.25, 0.0, 2.0)
REAL_RADICAND_TOL = 1e-14
SIGN_TOL = 1e-14


class Case(str, enum.Enum):
    I = "I"  # xi > 2
    II = "II"  # 0 < xi < 2
    III = "III"  # -1/4 < xi < 0
    IV = "IV"  # xi < -1/4


def check_xi(xi) -> float:
    xi = float(xi)
    if not math.isfinite(xi):
        raise DomainError(f"ray parameter must be finite, got {xi}")
    if xi in BOUNDARY_RAYS:
        raise DomainError(f"xi = {xi} is a boundary ray; asymptotics are not defined there")
    return xi


def _denominator(z):
    d = 1 + 4 * np.asarray(z) ** 2
    if np.any(np.abs(d) <= 1e-14):
        raise DomainError("the phase has poles at z = +-i/2")
    return d


def theta(z, xi):
    d = _denominator(z)
    out = np.asarray(z) * (xi - 2.0 / d)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class PhaseEval:
    theta: complex
    theta_prime: complex
    theta_double_prime: complex


def theta_prime(z, xi):
    z = np.asarray(z)
    d = _denominator(z)
    out = xi - 2 * (1 - 4 * z**2) / d**2
    return out[()] if out.ndim == 0 else out


def theta_double_prime(z, xi=None):
    """Second derivative; independent of xi."""
    z = np.asarray(z)
    d = _denominator(z)
    out = (48 * z - 64 * z**3) / d**3
    return out[()] if out.ndim == 0 else out


def theta_derivs(z, xi) -> PhaseEval:
    return PhaseEval(theta(z, xi), theta_prime(z, xi), theta_double_prime(z))


def theta_at_stationary(z):
    """theta(z_l) at a stationary point, using xi = 2(1-4z^2)/(1+4z^2)^2."""
    return -16 * z**3 / (1 + 4 * z**2) ** 2


def re_i_theta(z, xi):
    """Re(i theta(z)) from the explicit rational expression in Re z, Im z."""
    z = np.asarray(z, dtype=complex)
    u, v = z.real, z.imag
    p = 1 + 4 * u**2 - 4 * v**2
    q = 8 * u * v
    den = p**2 + q**2
    if np.any(den <= 1e-28):
        raise DomainError("the phase has poles at z = +-i/2")
    out = -v * xi - (16 * u**2 * v - 2 * v * p) / den
    return out[()] if out.ndim == 0 else out


def sign_re_i_theta(z, xi) -> int:
    val = float(re_i_theta(z, xi))
    if abs(val) <= SIGN_TOL * (1 + abs(z)):
        return 0
    return 1 if val > 0 else -1


def closed_form_points(xi):
    """(z0, z1) from the closed forms, as complex numbers (principal branches)."""
    xi = check_xi(xi)
    s = np.sqrt(complex(1 + 4 * xi))
    z0 = 0.5 * np.sqrt(-(xi + 1 - s) / xi)
    z1 = 0.5 * np.sqrt(-(xi + 1 + s) / xi)
    return complex(z0), complex(z1)


def _real_root(xi, sign):
    # radicand of the closed form; real point iff radicand >= 0 (within tolerance)
    disc = 1 + 4 * xi
    if disc < -REAL_RADICAND_TOL:
        return None
    rad = -(xi + 1 + sign * math.sqrt(max(disc, 0.0))) / xi
    if rad < -REAL_RADICAND_TOL:
        return None
    return 0.5 * math.sqrt(max(rad, 0.0))


@dataclass(frozen=True)
class RegionInfo:
    """Bookkeeping attached to a ray xi = y/t.

    ``points`` maps the labels 1..4 (xi_1 > xi_2 > 0 > xi_3 > xi_4) to the
    real stationary points that exist for this ray.  ``intervals`` is I(xi)
    as a tuple of (left, right) pairs, possibly with infinite ends.
    """

    xi: float
    case: Case
    points: dict
    n_xi: int
    intervals: tuple
    kappa0: Optional[float]
    z0: complex
    z1: complex
    rho: Optional[float] = None
    j0: Optional[int] = None

    @property
    def stationary_points(self) -> tuple:
        return tuple(sorted(self.points.values(), reverse=True))

    @property
    def I_xi(self) -> tuple:
        return self.intervals

    def endpoint_side(self, label: int) -> str:
        """'right' if I(xi) lies to the left of the point, else 'left'."""
        p = self.points[label]
        for lo, hi in self.intervals:
            if hi == p:
                return "right"
            if lo == p:
                return "left"
        raise DomainError(f"stationary point {label} is not an endpoint of I(xi)")

    def adjoining_length(self, label: int) -> float:
        p = self.points[label]
        for lo, hi in self.intervals:
            if p in (lo, hi):
                return hi - lo
        raise DomainError(f"stationary point {label} is not an endpoint of I(xi)")

    def in_I(self, s) -> bool:
        return any(lo < s < hi for lo, hi in self.intervals)

    def to_dict(self) -> dict:
        def f(v):
            return None if v is None else (v if math.isfinite(v) else ("inf" if v > 0 else "-inf"))

        return {
            "xi": self.xi,
            "case": self.case.value,
            "stationary_points": {f"xi{k}": v for k, v in sorted(self.points.items())},
            "n_xi": self.n_xi,
            "I_xi": [[f(lo), f(hi)] for lo, hi in self.intervals],
            "kappa0": self.kappa0,
            "z0": [self.z0.real, self.z0.imag],
            "z1": [self.z1.real, self.z1.imag],
            "rho": self.rho,
            "j0": self.j0,
        }


def stationary_points(xi) -> RegionInfo:
    xi = check_xi(xi)
    z0c, z1c = closed_form_points(xi)
    inf = math.inf
    if xi > 2:
        return RegionInfo(xi, Case.I, {}, 0, (), 0.5 * math.sqrt(1 - 2 / xi), z0c, z1c)
    if xi < -0.25:
        return RegionInfo(xi, Case.IV, {}, 0, ((-inf, inf),), None, z0c, z1c)
    z0 = _real_root(xi, -1)
    if xi > 0:
        return RegionInfo(xi, Case.II, {2: z0, 3: -z0}, 2, ((-z0, z0),), None, z0c, z1c)
    z1 = _real_root(xi, +1)
    intervals = ((-inf, -z1), (-z0, z0), (z1, inf))
    points = {1: z1, 2: z0, 3: -z0, 4: -z1}
    return RegionInfo(xi, Case.III, points, 4, intervals, None, z0c, z1c)


def classify(xi) -> Case:
    return stationary_points(xi).case


def pole_spacing_rho(heights) -> Optional[float]:
    """One third of the minimal gap between pole heights.

    A single pole has no pairs; we use min(1/6, half its distance to 0 and
    to 1/2) so the disc around it still avoids both.
    """
    h = sorted(float(a) for a in heights)
    if not h:
        return None
    if len(h) == 1:
        a = h[0]
        return min(1.0 / 6.0, 0.5 * a, 0.5 * (0.5 - a))
    return min(np.diff(h)) / 3.0


def select_j0(spec, info: RegionInfo) -> Optional[int]:
    """Index of the pole retained by the outer model on this ray, or None."""
    heights = [p.a for p in spec.poles]
    rho = pole_spacing_rho(heights)
    if rho is None:
        return None
    targets = [0.5]
    if info.case is Case.I:
        targets.insert(0, info.kappa0)
    for target in targets:
        cands = [(abs(target - a), j) for j, a in enumerate(heights) if abs(target - a) < rho]
        if cands:
            return min(cands)[1]
    return None


def with_spectrum(info: RegionInfo, spec) -> RegionInfo:
    rho = pole_spacing_rho([p.a for p in spec.poles])
    return replace(info, rho=rho, j0=select_j0(spec, info))
