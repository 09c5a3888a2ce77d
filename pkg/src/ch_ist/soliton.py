"""Reflectionless outer model and the parametric one-soliton of the CH equation.

Solutions come in the parametric form (y, t) -> (x, q).  For a single pole
z = i a with modified norming constant g,

    alpha(y, t) = g / (2a) * exp(-2a (y - v t)),   v = 2 / (1 - 4a^2),
    x = y + ln[(1 + alpha A) / (1 + alpha / A)],   A = (1 + 2a) / (1 - 2a),
    q = 32 a^2 alpha / ((1 - 4a^2)^2 [(1 + alpha)^2 + 16 a^2 alpha / (1 - 4a^2)]).

Everything is evaluated through ell = log(alpha) so that far tails neither
overflow nor lose the shift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataValidationError, DomainError


def t_theta(z, y, t):
    """t * theta(z; y/t), well defined also at t = 0."""
    z = np.asarray(z)
    return z * (y - 2.0 * t / (1 + 4 * z**2))


@dataclass(frozen=True)
class SolitonData:
    a: float
    gamma_tilde: float

    def __post_init__(self):
        if not (0.0 < self.a < 0.5):
            raise DataValidationError(f"pole height must lie in (0, 1/2), got {self.a}")
        if not (self.gamma_tilde > 0 and math.isfinite(self.gamma_tilde)):
            raise DataValidationError(f"norming constant must be positive, got {self.gamma_tilde}")

    @property
    def speed(self) -> float:
        return 2.0 / (1.0 - 4.0 * self.a**2)

    @property
    def log_A(self) -> float:
        return math.log((1 + 2 * self.a) / (1 - 2 * self.a))

    def log_alpha(self, y, t):
        a = self.a
        return math.log(self.gamma_tilde / (2 * a)) - 2 * a * (np.asarray(y, float) - self.speed * t)

    def alpha(self, y, t):
        return np.exp(self.log_alpha(y, t))

    def shift(self, y, t):
        """c = x - y, increasing from 0 (y -> +inf) to 2 ln A (y -> -inf)."""
        ell = self.log_alpha(y, t)
        return np.logaddexp(0.0, ell + self.log_A) - np.logaddexp(0.0, ell - self.log_A)

    def q_param(self, y, t):
        a = self.a
        k = 16 * a**2 / (1 - 4 * a**2)
        K = 32 * a**2 / (1 - 4 * a**2) ** 2
        ell = self.log_alpha(y, t)
        with np.errstate(over="ignore"):
            return K / (2 * np.cosh(ell) + 2 + k)

    @property
    def peak(self) -> float:
        a = self.a
        return 32 * a**2 / (1 - 4 * a**2) ** 2 / (4 + 16 * a**2 / (1 - 4 * a**2))


def q_from_alpha(a: float, alpha: float) -> float:
    """Profile value at a given alpha."""
    k = 16 * a**2 / (1 - 4 * a**2)
    return 32 * a**2 * alpha / ((1 - 4 * a**2) ** 2 * ((1 + alpha) ** 2 + k * alpha))


@dataclass(frozen=True)
class ParametricPoint:
    y: float
    t: float
    x: float
    q: float
    alpha: float


def one_soliton(data: SolitonData, y, t) -> ParametricPoint:
    y = float(y)
    return ParametricPoint(
        y=y,
        t=float(t),
        x=y + float(data.shift(y, t)),
        q=float(data.q_param(y, t)),
        alpha=float(data.alpha(y, t)),
    )


def invert_x(data: SolitonData, x, t, tol: float = 1e-12, max_iter: int = 200):
    """Solve x = y + c(y, t) for y by vectorised bisection.

    c lies in [0, 2 ln A] so y is bracketed by [x - 2 ln A, x]; the map
    y -> y + c is strictly increasing, which keeps bisection safe.
    """
    x = np.asarray(x, dtype=float)
    lo = x - 2 * data.log_A - 1e-12
    hi = x + 1e-12
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f = mid + data.shift(mid, t) - x
        lo = np.where(f < 0, mid, lo)
        hi = np.where(f < 0, hi, mid)
        if np.all(hi - lo <= tol):
            break
    y = 0.5 * (lo + hi)
    return y[()] if y.ndim == 0 else y


def q_of_x(data: SolitonData, x, t):
    return data.q_param(invert_x(data, x, t), t)


# ---------------------------------------------------------------- outer model


def outer_matrix(poles, y: float, t: float, z) -> np.ndarray:
    """Reflectionless 2x2 solution at z for poles [(a_j, g_j), ...].

    The columns have the form
        N[:, 0](z) = e1 + sum_j c_j u_j / (z - z_j),      c_j = i g_j exp(2 i t theta(z_j)),
        N[:, 1](z) = e2 + sum_j d_j v_j / (z - conj z_j), d_j = -i g_j exp(-2 i t theta(conj z_j)),
    with u_j = N[:, 1](z_j), v_j = N[:, 0](conj z_j).  Closing at the poles gives
    a dense linear system, solved for the products c_j u_j and d_j v_j so that
    exponentially large or small weights (a soliton far from y) stay finite.
    """
    cu, dv, zs = _outer_residues(poles, y, t)
    z = complex(z)
    N = np.eye(2, dtype=complex)
    for j in range(len(zs)):
        if abs(z - zs[j]) < 1e-14 or abs(z - np.conj(zs[j])) < 1e-14:
            raise DomainError("outer matrix evaluated at a pole")
        N[:, 0] += cu[j] / (z - zs[j])
        N[:, 1] += dv[j] / (z - np.conj(zs[j]))
    return N


def _outer_residues(poles, y, t):
    """(c_j u_j, d_j v_j, z_j).  c_j = i g_j e^lam_j and d_j = -i g_j e^lam_j with lam_j real."""
    poles = [(float(a), float(g)) for a, g in poles]
    n = len(poles)
    zs = np.array([1j * a for a, _ in poles], dtype=complex)
    if n == 0:
        return np.zeros((0, 2), complex), np.zeros((0, 2), complex), zs
    g = np.array([g for _, g in poles])
    lam = np.real(2j * t_theta(zs, y, t))
    # unknowns [cu_0..cu_{n-1}, dv_0..dv_{n-1}], each a 2-vector.  The u-row
    #   cu_j / c_j - sum_k dv_k / (z_j - conj z_k) = e2
    # is used as is when lam_j >= 0 (1/c_j is small) and multiplied by c_j
    # otherwise; the v-rows are treated the same way with d_j.
    M = np.zeros((4 * n, 4 * n), dtype=complex)
    rhs = np.zeros(4 * n, dtype=complex)
    I2 = np.eye(2)
    for j in range(n):
        for row, w, e, other in ((j, 1j * g[j], 1, n), (n + j, -1j * g[j], 0, 0)):
            r = slice(2 * row, 2 * row + 2)
            if lam[j] >= 0:
                diag, scale = np.exp(-lam[j]) / w, 1.0
            else:
                diag, scale = 1.0, w * np.exp(lam[j])
            M[r, r] = diag * I2
            zj = zs[j] if row < n else np.conj(zs[j])
            for k in range(n):
                zk = np.conj(zs[k]) if row < n else zs[k]
                c = slice(2 * (other + k), 2 * (other + k) + 2)
                M[r, c] -= scale / (zj - zk) * I2
            rhs[2 * row + e] = scale
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise DomainError("degenerate reflectionless data: singular residue system") from exc
    if not np.all(np.isfinite(sol)):
        raise DomainError("degenerate reflectionless data: singular residue system")
    return sol[: 2 * n].reshape(n, 2), sol[2 * n :].reshape(n, 2), zs


def outer_row(poles, y, t, z) -> np.ndarray:
    return np.array([1.0, 1.0]) @ outer_matrix(poles, y, t, z)


def f_closed_form(a: float, alpha: float, z) -> complex:
    """First component of the one-pole row vector."""
    zj = 1j * a
    return (1 + alpha * (z + zj) / (z - zj)) / (1 + alpha)
