"""Long-time approximation: soliton term plus the t^(-1/2) stationary-phase tail.

Near each real stationary point p the local model contributes a simple pole

    K_p / (z - p) * t^(-1/2),      s_l = sqrt(2 |theta''(z_l)|),
    K_{+z_l} =  (i / s_l) [[0, -beta_l], [conj beta_l, 0]]   where theta''(z_l) > 0 (z0),
    K_{+z_l} = -(1 / s_l) [[0, beta_l], [conj beta_l, 0]]    where theta''(z_l) < 0 (z1),
    K_{-z_l} = -sigma1 K_{+z_l} sigma1,

which, conjugated by the reflectionless outer matrix N, gives the error
matrix E(z) = I + t^(-1/2) sum_p N(p) K_p N(p)^(-1) / (z - p).  B0 and B1
are the row (1 1) E and its z-derivative at z = i/2 with t^(-1/2) factored
out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import loggamma

from . import weightfn
from .errors import ConvergenceError, DomainError
from .phase import BOUNDARY_RAYS, Case, RegionInfo, stationary_points, theta, theta_double_prime, with_spectrum
from .soliton import SolitonData, outer_matrix

TAU = 0.2
T_MIN = 5.0
ONES = np.array([1.0, 1.0])
SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class PointCoeffs:
    label: int
    z: float
    nu: float
    r: complex
    theta: float
    theta_pp: float
    beta: complex
    Tk: complex
    negative_curvature: bool

    @property
    def scale(self) -> float:
        return math.sqrt(2 * abs(self.theta_pp))


@dataclass
class LocalModelCoeffs:
    t: float
    points: dict = field(default_factory=dict)  # label -> PointCoeffs

    @property
    def beta0(self) -> complex:
        return self.points[2].beta if 2 in self.points else 0j

    @property
    def beta1(self) -> complex:
        return self.points[1].beta if 1 in self.points else 0j


def beta_coefficient(nu: float, r: complex, Tk: complex, theta_l: float, theta_pp: float, t: float, sign: int):
    """sqrt(nu) exp(i phase); sign = +1 for the inner pair (z0), -1 for the outer pair (z1)."""
    if nu == 0:
        return 0j
    phase = (
        sign * math.pi / 4
        - np.angle(r)
        + sign * float(loggamma(1j * nu).imag)
        + 2 * np.angle(Tk)
        - sign * nu * math.log(2 * t * abs(theta_pp))
        - sign * 2 * t * theta_l
    )
    return math.sqrt(nu) * complex(np.exp(1j * phase))


def local_coeffs(spec, info: RegionInfo, t: float, exclude_j0: bool = True) -> LocalModelCoeffs:
    if t <= 0:
        raise DomainError("t must be positive")
    if info.n_xi == 0:
        raise DomainError(f"xi = {info.xi} has no real stationary points")
    out = LocalModelCoeffs(t)
    # labels 2 and 1 carry the positive points z0 and z1; the negative ones mirror them
    for label in (2, 1):
        if label not in info.points:
            continue
        z = info.points[label]
        lim = weightfn.local_limit(spec, info, label, exclude_j0)
        r = complex(weightfn.reflection(spec, z))
        nu = lim.nu_k if r != 0 else 0.0
        tpp = float(theta_double_prime(z))
        neg = tpp <= 0  # outer pair in case III: conjugate local model
        beta = beta_coefficient(nu, r, lim.Tk, float(theta(z, info.xi)), tpp, t, +1 if label == 2 else -1)
        out.points[label] = PointCoeffs(label, z, nu, r, float(theta(z, info.xi)), tpp, beta, lim.Tk, neg)
    return out


def _residues(coeffs: LocalModelCoeffs):
    """[(p, K_p)] for the four (or two) stationary points; K_{-p} = -sigma1 K_p sigma1."""
    res = []
    for pc in coeffs.points.values():
        b, s = pc.beta, pc.scale
        if pc.negative_curvature:
            Kp = -(1 / s) * np.array([[0, b], [np.conj(b), 0]])
        else:
            Kp = (1j / s) * np.array([[0, -b], [np.conj(b), 0]])
        res.append((pc.z, Kp))
        res.append((-pc.z, -SIGMA1 @ Kp @ SIGMA1))
    return res


def local_model_row(z, coeffs: LocalModelCoeffs, info: RegionInfo = None, t: float = None) -> np.ndarray:
    t = coeffs.t if t is None else t
    z = complex(z)
    row = ONES.astype(complex)
    for p, K in _residues(coeffs):
        if z == p:
            raise DomainError("local model evaluated at a stationary point")
        row = row + t ** -0.5 * (ONES @ K) / (z - p)
    return row


@dataclass
class CorrectionTerms:
    B0: np.ndarray
    B1: np.ndarray
    f1: complex
    f2: Optional[complex]
    q_correction: float = 0.0  # coefficient of t^(-1/2) in q
    x_correction: float = 0.0  # coefficient of t^(-1/2) in x - y

    @property
    def f2_defined(self) -> bool:
        return self.f2 is not None


def correction_terms(spec, info: RegionInfo, t: float, data: SolitonData = None, y: float = None,
                     coeffs: LocalModelCoeffs = None) -> CorrectionTerms:
    if info.case not in (Case.II, Case.III):
        raise DomainError("corrections exist only for -1/4 < xi < 2")
    coeffs = local_coeffs(spec, info, t) if coeffs is None else coeffs
    y = info.xi * t if y is None else y
    poles = [] if data is None else [(data.a, data.gamma_tilde)]
    B0 = np.zeros(2, complex)
    B1 = np.zeros(2, complex)
    for p, K in _residues(coeffs):
        if not np.any(K):
            continue
        if poles:
            N = outer_matrix(poles, y, t, p)
            C = N @ K @ np.linalg.inv(N)
        else:
            C = K
        w = 0.5j - p
        B0 = B0 + ONES @ C / w
        B1 = B1 - ONES @ C / w**2
    f1 = complex(B1[0] + B1[1])
    N_half = outer_matrix(poles, y, t, 0.5j)
    MR = ONES @ N_half
    num, den = MR[0] * B1[0], MR[1] * B1[1]
    if num == 0 and den == 0:
        f2 = 0j
    elif abs(den) <= 1e-300:
        f2 = None
    else:
        f2 = complex(num / den)
    # q = (1/2i) d/dz log(M1 M2) and x = y + 2 log(M1/M2) at z = i/2, linearised in t^(-1/2)
    dR = B0 @ N_half
    q_corr = f1 / 2j
    x_corr = 2 * (dR[0] / MR[0] - dR[1] / MR[1])
    return CorrectionTerms(B0, B1, f1, f2, float(q_corr.real), float(x_corr.real))


# ------------------------------------------------------------------ evaluate


@dataclass(frozen=True)
class AsymptoticResult:
    x: float
    t: float
    y: float
    xi: float
    case: Case
    q_leading: float
    x_shift: float
    correction: float
    order_tag: str
    j0: Optional[int] = None
    f1: complex = 0j
    f2: Optional[complex] = 0j
    iterations: int = 0
    tau: float = TAU

    @property
    def q_total(self) -> float:
        return self.q_leading + self.correction


def order_tag(case: Case) -> str:
    return "O(t^-1)" if case in (Case.II, Case.III) else "O(t^-1+2tau)"


def retained_soliton(spec, info: RegionInfo) -> Optional[SolitonData]:
    """Modified data for the retained pole: gamma / That(i a)^2 with That free of that pole."""
    if info.j0 is None:
        return None
    pole = spec.poles[info.j0]
    That = weightfn.T(spec, info, 1j * pole.a, exclude_j0=True)
    g = pole.gamma / That**2
    if abs(g.imag) > 1e-8 * abs(g):
        raise ConvergenceError("modified norming constant is not real; reflection data is not symmetric")
    return SolitonData(pole.a, float(g.real))


class _State:
    """Everything that depends on y only through the region and xi."""

    def __init__(self, spec, y, t):
        xi = y / t
        if xi in BOUNDARY_RAYS:
            # iterates may land exactly on a boundary ray; step off it
            xi = xi + 1e-12
        info = with_spectrum(stationary_points(xi), spec)
        self.info = info
        self.data = retained_soliton(spec, info)
        Th, _ = weightfn.T_expansion(spec, info, exclude_j0=True)
        self.log_T = 2 * complex(np.log(Th)).real
        self.terms = None
        if info.case in (Case.II, Case.III) and not spec.reflectionless:
            self.terms = correction_terms(spec, info, t, self.data, y)

    def shift(self, y, t):
        s = self.log_T
        if self.data is not None:
            s += float(self.data.shift(y, t))
        if self.terms is not None:
            s += self.terms.x_correction * t**-0.5
        return s


def evaluate(spec, x: float, t: float, t_min: float = T_MIN, tol: float = 1e-10, max_iter: int = 200) -> AsymptoticResult:
    """Leading-order q at physical (x, t), solving x = y + shift(y) by fixed-point iteration."""
    if t < t_min:
        raise DomainError(f"t = {t} is below t_min = {t_min}")
    y = float(x)
    for it in range(1, max_iter + 1):
        st = _State(spec, y, t)
        y_new = x - st.shift(y, t)
        if abs(y_new - y) <= tol:
            y = y_new
            break
        y = y_new
    else:
        raise ConvergenceError(f"y-inversion did not converge at x = {x}, t = {t}")
    st = _State(spec, y, t)
    q_sol = 0.0 if st.data is None else float(st.data.q_param(y, t))
    corr, f1, f2 = 0.0, 0j, 0j
    if st.terms is not None:
        f1, f2 = st.terms.f1, st.terms.f2
        corr = st.terms.q_correction * t**-0.5
    return AsymptoticResult(
        x=float(x), t=float(t), y=y, xi=y / t, case=st.info.case, q_leading=q_sol,
        x_shift=float(x - y), correction=corr, order_tag=order_tag(st.info.case),
        j0=st.info.j0, f1=f1, f2=f2, iterations=it,
    )
