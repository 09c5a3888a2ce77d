"""Forward scattering for psi_xx = psi/4 - (z^2 + 1/4) m psi with m = q - q_xx + 1.

Continuous spectrum.  With psi = exp(-izx) u the left Jost solution obeys

    u'' = 2iz u' - (z^2 + 1/4)(m - 1) u,    u(-L) = 1, u'(-L) = 0,

and at x = L we read off psi = a exp(-izx) + b exp(izx).  The reflection
coefficient is r = b / a.

Discrete spectrum.  On z = i s the same equation is real; zeros of a(is)
for s in (0, 1/2) are the eigenvalues.  The norming constant is
gamma = 1 / int m Phi^2 dx with Phi ~ exp(-s x) at +infinity.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import ConvergenceError, DataValidationError

RTOL = 1e-10
ATOL = 1e-12


# ---------------------------------------------------------------- data types


@dataclass(frozen=True)
class Pole:
    a: float
    gamma: float

    @property
    def z(self) -> complex:
        return 1j * self.a


@dataclass
class SpectralData:
    """Discrete spectrum plus sampled reflection coefficient on a real grid.

    On ingest the samples are sorted and the symmetry r(-z) = conj r(z) is
    imposed by averaging mirrored pairs (a sample without a mirror gets one).
    """

    poles: list = field(default_factory=list)
    z: np.ndarray = field(default_factory=lambda: np.zeros(0))
    r: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    def __post_init__(self):
        self.poles = [p if isinstance(p, Pole) else Pole(*p) for p in self.poles]
        heights = [p.a for p in self.poles]
        for p in self.poles:
            if not (0 < p.a < 0.5):
                raise DataValidationError(f"pole height {p.a} outside (0, 1/2)")
            if not (p.gamma > 0 and math.isfinite(p.gamma)):
                raise DataValidationError(f"norming constant {p.gamma} must be positive")
        if len(set(heights)) != len(heights):
            raise DataValidationError("pole heights must be pairwise distinct")
        self.z, self.r = symmetrize(np.asarray(self.z, float), np.asarray(self.r, complex))
        if self.r.size and np.max(np.abs(self.r)) >= 1:
            raise DataValidationError("|r| >= 1 on the reflection grid")

    @property
    def reflectionless(self) -> bool:
        return not np.any(self.r != 0)

    def to_json(self) -> dict:
        return {
            "kappa": 1,
            "poles": [{"a": p.a, "gamma": p.gamma} for p in self.poles],
            "reflection": [
                {"z": float(z), "re": float(r.real), "im": float(r.imag)} for z, r in zip(self.z, self.r)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SpectralData":
        if obj.get("kappa", 1) != 1:
            raise DataValidationError("only kappa = 1 is supported")
        try:
            poles = [Pole(float(p["a"]), float(p["gamma"])) for p in obj.get("poles", [])]
            refl = obj.get("reflection", [])
            z = np.array([float(s["z"]) for s in refl])
            r = np.array([complex(float(s["re"]), float(s["im"])) for s in refl])
        except (KeyError, TypeError, ValueError) as exc:
            raise DataValidationError(f"malformed spectral data: {exc}") from exc
        return cls(poles, z, r)

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json(), indent=1))

    @classmethod
    def load(cls, path) -> "SpectralData":
        try:
            obj = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise DataValidationError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_json(obj)


def symmetrize(z, r, tol: float = 1e-9):
    """Enforce r(-s) = conj r(s), averaging mirrored pairs and filling in missing mirrors.

    Samples whose magnitudes agree to ``tol`` (relative) count as a mirrored pair, so
    grids built as -z[::-1] with rounding noise do not produce duplicate knots.
    """
    if z.size == 0:
        return z, r
    if z.shape != r.shape:
        raise DataValidationError("reflection grid and values differ in length")
    mags = []  # [magnitude, value at +s or None, value at -s or None]
    for _, s, v in sorted(zip(np.abs(z), z, r), key=lambda e: e[0]):
        s, v = float(s), complex(v)
        if mags and abs(abs(s) - mags[-1][0]) <= tol * max(1.0, abs(s)):
            entry = mags[-1]
        else:
            entry = [abs(s), None, None]
            mags.append(entry)
        entry[1 if s >= 0 else 2] = v
    zs, rs = [], []
    for m, vp, vm in mags:
        if m == 0:
            zs.append(0.0)
            rs.append(complex((vp if vp is not None else vm).real, 0.0))
            continue
        if vp is None:
            vp = np.conj(vm)
        if vm is None:
            vm = np.conj(vp)
        v = 0.5 * (vp + np.conj(vm))
        zs += [m, -m]
        rs += [v, np.conj(v)]
    order = np.argsort(zs)
    return np.array(zs)[order], np.array(rs)[order]


@dataclass
class InitialDatum:
    x: np.ndarray
    q0: np.ndarray
    m0: np.ndarray = None
    tail_tol: float = 1e-10

    def __post_init__(self):
        self.x = np.asarray(self.x, float)
        self.q0 = np.asarray(self.q0, float)
        if self.x.ndim != 1 or self.x.shape != self.q0.shape or self.x.size < 16:
            raise DataValidationError("need matching 1-D arrays x, q0 with at least 16 samples")
        h = np.diff(self.x)
        if np.any(h <= 0) or np.ptp(h) > 1e-9 * h.mean():
            raise DataValidationError("grid must be uniform and increasing")
        if max(abs(self.q0[0]), abs(self.q0[-1])) > self.tail_tol:
            raise DataValidationError("q0 does not decay at the grid ends")
        if self.m0 is None:
            self.m0 = self.q0 - second_derivative(self.q0, h.mean()) + 1.0
        if np.any(self.m0 <= 0):
            raise DataValidationError("m = q - q_xx + 1 must be positive")
        self._spline = CubicSpline(self.x, self.m0 - 1.0)

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def L(self) -> float:
        return float(self.x[-1])

    @property
    def span(self):
        return float(self.x[0]), float(self.x[-1])

    def m_minus_one(self, x):
        return self._spline(x)

    @classmethod
    def from_function(cls, q, L: float = 40.0, h: float = 1 / 128, **kw) -> "InitialDatum":
        n = int(round(2 * L / h))
        x = np.linspace(-L, L, n + 1)
        return cls(x, np.asarray(q(x), float), **kw)

    @classmethod
    def from_csv(cls, path, **kw) -> "InitialDatum":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        try:
            x = [float(r["x"]) for r in rows]
            q = [float(r["q0"]) for r in rows]
        except (KeyError, ValueError) as exc:
            raise DataValidationError(f"{path}: expected columns x,q0 ({exc})") from exc
        return cls(np.array(x), np.array(q), **kw)


def second_derivative(f, h):
    """Fourth-order centred second difference, one-sided-free by zero padding of decayed tails."""
    g = np.pad(f, 2, mode="edge")
    return (-g[:-4] + 16 * g[1:-3] - 30 * g[2:-2] + 16 * g[3:-1] - g[4:]) / (12 * h * h)


# ------------------------------------------------------------- continuous part


def _check(sol):
    if not sol.success:
        raise ConvergenceError(f"Jost integration failed: {sol.message}")


def jost_pair(datum: InitialDatum, z):
    """Transition coefficients (a(z), b(z)); z may be a scalar or 1-D array of reals or complexes."""
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(zz == 0):
        raise DataValidationError("z = 0 is excluded (a has no finite normalisation there)")
    n = zz.size
    w = zz**2 + 0.25

    def rhs(x, y):
        u, up = y[:n], y[n:]
        return np.concatenate([up, 2j * zz * up - w * datum.m_minus_one(x) * u])

    y0 = np.concatenate([np.ones(n, complex), np.zeros(n, complex)])
    L = datum.L
    sol = solve_ivp(rhs, datum.span, y0, method="RK45", rtol=RTOL, atol=ATOL)
    _check(sol)
    u, up = sol.y[:n, -1], sol.y[n:, -1]
    a = u - up / (2j * zz)
    b = np.exp(-2j * zz * L) * up / (2j * zz)
    if np.ndim(z) == 0:
        return complex(a[0]), complex(b[0])
    return a, b


def default_grid(zmax: float = 6.0, n: int = 120) -> np.ndarray:
    pos = np.linspace(zmax / n, zmax, n)
    return np.concatenate([-pos[::-1], pos])


def reflection_coefficient(datum: InitialDatum, grid=None, chunk: int = 64):
    """Samples (z, r) on a symmetric grid that excludes 0."""
    grid = default_grid() if grid is None else np.asarray(grid, float)
    grid = np.unique(grid)
    if np.any(grid == 0):
        raise DataValidationError("the reflection grid must exclude z = 0")
    pos = np.unique(np.abs(grid))
    r_pos = np.empty(pos.size, complex)
    for i in range(0, pos.size, chunk):
        a, b = jost_pair(datum, pos[i : i + chunk])
        r_pos[i : i + chunk] = b / a
    if np.max(np.abs(r_pos), initial=0.0) >= 1:
        raise DataValidationError("|r| >= 1 on the grid; datum is outside the admissible class")
    lookup = dict(zip(pos, r_pos))
    r = np.array([lookup[abs(s)] if s > 0 else np.conj(lookup[abs(s)]) for s in grid])
    return grid, r


# --------------------------------------------------------------- discrete part


def _a_on_axis(datum: InitialDatum, s):
    """a(i s) for an array of s in (0, 1/2); real valued."""
    s = np.atleast_1d(np.asarray(s, float))
    n = s.size
    w = 0.25 - s**2

    def rhs(x, y):
        u, up = y[:n], y[n:]
        return np.concatenate([up, -2 * s * up - w * datum.m_minus_one(x) * u])

    y0 = np.concatenate([np.ones(n), np.zeros(n)])
    sol = solve_ivp(rhs, datum.span, y0, method="RK45", rtol=RTOL, atol=ATOL)
    _check(sol)
    u, up = sol.y[:n, -1], sol.y[n:, -1]
    return u + up / (2 * s)


def norming_constant(datum: InitialDatum, s: float) -> float:
    """gamma = 1 / int m Phi^2 for the eigenfunction Phi ~ exp(-s x) at +infinity.

    Left and right solutions are integrated to the matching point x0 (where
    m - 1 is largest) along with the weighted L2 integrals; the exponential
    tails beyond +-L are added analytically.
    """
    xl, xr = datum.span
    x0 = float(datum.x[np.argmax(np.abs(datum.m0 - 1))])
    w = 0.25 - s * s

    def left(x, y):  # Phi_- = exp(s x) u
        u, up, _ = y
        m1 = datum.m_minus_one(x)
        return [up, -2 * s * up - w * m1 * u, (1 + m1) * math.exp(2 * s * x) * u * u]

    def right(x, y):  # Phi_+ = exp(-s x) v
        v, vp, _ = y
        m1 = datum.m_minus_one(x)
        return [vp, 2 * s * vp - w * m1 * v, -(1 + m1) * math.exp(-2 * s * x) * v * v]

    sl = solve_ivp(left, (xl, x0), [1.0, 0.0, 0.0], method="RK45", rtol=RTOL, atol=1e-14)
    sr = solve_ivp(right, (xr, x0), [1.0, 0.0, 0.0], method="RK45", rtol=RTOL, atol=1e-14)
    _check(sl)
    _check(sr)
    I_minus = sl.y[2, -1] + math.exp(2 * s * xl) / (2 * s)
    I_plus = sr.y[2, -1] + math.exp(-2 * s * xr) / (2 * s)
    ratio = (math.exp(s * x0) * sl.y[0, -1]) / (math.exp(-s * x0) * sr.y[0, -1])
    return 1.0 / (I_plus + I_minus / ratio**2)


def discrete_spectrum(datum: InitialDatum, n_scan: int = 200, edge: float = 1e-6):
    """Zeros of a(i s), s in (0, 1/2), with their norming constants."""
    geo = np.geomspace(edge, 0.05, 40)
    uni = np.linspace(0.05, 0.5 - edge, n_scan)
    s = np.unique(np.concatenate([geo, uni]))
    vals = _a_on_axis(datum, s)
    poles = []
    for k in range(s.size - 1):
        if vals[k] == 0 or np.sign(vals[k]) != np.sign(vals[k + 1]):
            root = brentq(lambda t: float(_a_on_axis(datum, t)[0]), s[k], s[k + 1], xtol=1e-13)
            if root < edge or root > 0.5 - edge:
                raise ConvergenceError(f"eigenvalue at s = {root} too close to an endpoint to resolve")
            poles.append(Pole(float(root), float(norming_constant(datum, root))))
    return sorted(poles, key=lambda p: p.a)


def scatter(datum: InitialDatum, grid=None) -> SpectralData:
    z, r = reflection_coefficient(datum, grid)
    return SpectralData(discrete_spectrum(datum), z, r)
