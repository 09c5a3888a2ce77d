"""Self-check suites run by ``ch-ist verify`` and reused by the acceptance tests."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import phase, weightfn
from .asymptotics import correction_terms, evaluate, local_coeffs
from .pde_oracle import GridSpec, decay_fit, evolve, residual
from .scattering import InitialDatum, SpectralData, jost_pair, scatter
from .soliton import SolitonData, f_closed_form, invert_x, one_soliton, outer_matrix, outer_row, q_of_x


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def check(name, value, bound, cmp="<="):
    ok = value <= bound if cmp == "<=" else value >= bound
    return Check(name, bool(ok), f"{value:.3e} {cmp} {bound:.1e}")


def synthetic_spectrum(seed: int = 0, amp: float = 0.3, poles=((0.25, 1.0),)) -> SpectralData:
    """Smooth symmetric reflection r(z) = amp exp(-z^2)(1 + 0.2 i z) on [-6, 6]."""
    z = np.linspace(-6, 6, 241)
    z = z[z != 0]
    r = amp * np.exp(-z * z) * (1 + 0.2j * z)
    return SpectralData(list(poles), z, r)


def bisect_theta_prime(xi, lo, hi):
    return brentq(lambda s: float(phase.theta_prime(s, xi)), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def sample_xi(rng, case: str, n: int):
    if case == "II":
        return rng.uniform(0.01, 1.99, n)
    return rng.uniform(-0.249, -0.001, n)


# ------------------------------------------------------------------ phase


def stationary_point_errors(xis):
    """(max |theta'| at the reported points, max distance to bisection roots)."""
    worst_res, worst_gap = 0.0, 0.0
    for xi in xis:
        info = phase.stationary_points(xi)
        for p in info.points.values():
            worst_res = max(worst_res, abs(float(phase.theta_prime(p, xi))))
        z0 = info.points[2]
        worst_gap = max(worst_gap, abs(z0 - bisect_theta_prime(xi, 1e-9, np.sqrt(3) / 2)))
        if 1 in info.points:
            z1 = info.points[1]
            worst_gap = max(worst_gap, abs(z1 - bisect_theta_prime(xi, np.sqrt(3) / 2, 1e3)))
    return worst_res, worst_gap


def suite_phase(seed: int = 0):
    rng = np.random.default_rng(seed)
    out = []
    z = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    xi = rng.uniform(-3, 3, 1000)
    th = phase.theta(z, xi)
    out.append(check("theta is odd", float(np.max(np.abs(phase.theta(-z, xi) + th) / (1 + np.abs(th)))), 1e-12))
    for case in ("II", "III"):
        res, gap = stationary_point_errors(sample_xi(rng, case, 100))
        out.append(check(f"|theta'| at stationary points, case {case}", res, 1e-10))
        out.append(check(f"closed form vs bisection, case {case}", gap, 1e-10))
    expected = {-1.0: "IV", -0.1: "III", 1.0: "II", 3.0: "I"}
    got = {x: phase.classify(x).value for x in expected}
    out.append(Check("classification probes", got == expected, str(got)))
    gaps = [abs(phase.closed_form_points(-0.25 + 10.0**-k)[0] - phase.closed_form_points(-0.25 + 10.0**-k)[1])
            for k in range(2, 9)]
    out.append(Check("z0, z1 coalesce at xi = -1/4", bool(np.all(np.diff(gaps) < 0)), f"gaps {gaps[0]:.2e} .. {gaps[-1]:.2e}"))
    return out


# ----------------------------------------------------------------- weights


def tt_identity_error(spec, info, n: int = 100, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        z = complex(rng.normal(), rng.normal())
        near_pole = any(abs(abs(z) - p.a) < 1e-3 and abs(z.real) < 1e-3 for p in spec.poles)
        if abs(z.imag) < 1e-3 or near_pole:
            continue
        worst = max(worst, abs(weightfn.T(spec, info, z) * weightfn.T(spec, info, -z) - 1))
    return worst


def piecewise_cubic_pv(pp, lo: float, hi: float, s: float) -> float:
    """Exact principal value of int_lo^hi p(u) / (u - s) du for a piecewise cubic (scipy PPoly layout).

    On each piece p(u) = p(s) + (u - s) Q(u) by synthetic division, so the
    integral is int Q plus p(s) log|u - s| at the ends.  At u = s the two
    adjacent logs cancel and are dropped.
    """
    cuts = np.unique(np.concatenate([[lo, hi], pp.x[(pp.x > lo) & (pp.x < hi)], [s] if lo < s < hi else []]))
    u0, u1 = cuts[:-1], cuts[1:]
    idx = np.clip(np.searchsorted(pp.x, 0.5 * (u0 + u1)) - 1, 0, pp.c.shape[1] - 1)
    x0 = pp.x[idx]
    a, b, c, e = pp.c[:, idx]
    d = s - x0
    q1 = b + a * d
    q0 = c + q1 * d
    ps = e + q0 * d
    v0, v1 = u0 - x0, u1 - x0
    total = np.sum(a * (v1**3 - v0**3) / 3 + q1 * (v1**2 - v0**2) / 2 + q0 * (v1 - v0))
    with np.errstate(divide="ignore"):
        l1 = np.where(u1 == s, 0.0, np.log(np.abs(u1 - s)))
        l0 = np.where(u0 == s, 0.0, np.log(np.abs(u0 - s)))
    return float(total + np.sum(ps * (l1 - l0)))


def plemelj_error(spec, info, stride: int = 1) -> float:
    """Worst |delta_+/delta_- - (1 - |r|^2)| over interior grid points, with delta_+ also
    checked against the exact principal value of the interpolated nu."""
    it = weightfn._interp(spec)
    worst = 0.0
    for s, r in list(zip(spec.z, spec.r))[::stride]:
        if not info.in_I(s) or abs(s) > 3:
            continue
        dp = weightfn.delta(spec, info, s, +1)
        dm = weightfn.delta(spec, info, s, -1)
        worst = max(worst, abs(dp / dm - (1 - abs(r) ** 2)))
        pv = 0.0
        for lo, hi in info.intervals:
            lo, hi = max(lo, it.lo), min(hi, it.hi)
            if hi > lo:
                pv += piecewise_cubic_pv(it._lognu, lo, hi, s)
        oracle = np.exp(1j * (pv + 1j * np.pi * float(it.nu(s))))
        worst = max(worst, abs(dp - oracle))
    return worst


def suite_weight(seed: int = 0):
    out = []
    spec = synthetic_spectrum(seed)
    for xi in (-1.0, -0.1, 1.0):
        info = phase.stationary_points(xi)
        out.append(check(f"T(z)T(-z) = 1, xi = {xi}", tt_identity_error(spec, info, seed=seed), 1e-8))
        out.append(check(f"Plemelj jump, xi = {xi}", plemelj_error(spec, info), 1e-6))
        Th, T1 = weightfn.T_expansion(spec, info)
        h = 1e-5
        fd = (np.log(weightfn.T(spec, info, 0.5j + h)) - np.log(weightfn.T(spec, info, 0.5j - h))) / (2 * h)
        out.append(check(f"T1 vs finite difference, xi = {xi}", abs(T1 - fd), 1e-8))
        for k in info.points:
            lim = weightfn.local_limit(spec, info, k)
            out.append(check(f"|T_{k}| = 1, xi = {xi}", abs(abs(lim.Tk) - 1), 1e-8))
    single = SpectralData([(0.25, 1.0)])
    Th, _ = weightfn.T_expansion(single, phase.stationary_points(1.0))
    out.append(check("T(i/2) = 3 for one reflectionless pole", abs(Th - 3), 1e-12))
    return out


# ----------------------------------------------------------------- soliton


def soliton_residual(a: float = 0.25, gamma: float = 1.0) -> float:
    data = SolitonData(a, gamma)
    return residual(lambda x, t: q_of_x(data, x, t), (-20, 20), (1, 5), h=1e-2)


def suite_soliton(seed: int = 0):
    rng = np.random.default_rng(seed)
    out = [check("PDE residual of the one-soliton", soliton_residual(), 1e-4)]
    data = SolitonData(0.25, 1.0)
    x = rng.uniform(-30, 30, 100)
    y = invert_x(data, x, 2.0)
    out.append(check("invert_x roundtrip", float(np.max(np.abs(y + data.shift(y, 2.0) - x))), 1e-10))
    out.append(check("q >= 0", -float(np.min(q_of_x(data, np.linspace(-50, 50, 2001), 1.0))), 0.0))
    worst_row, worst_det = 0.0, 0.0
    for _ in range(100):
        z = complex(rng.normal(), rng.normal())
        yv, tv = rng.uniform(-5, 5), rng.uniform(0, 3)
        al = float(data.alpha(yv, tv))
        row = outer_row([(data.a, data.gamma_tilde)], yv, tv, z)
        worst_row = max(worst_row, float(np.max(np.abs(row - [f_closed_form(data.a, al, z), f_closed_form(data.a, al, -z)]))))
        worst_det = max(worst_det, abs(np.linalg.det(outer_matrix([(data.a, data.gamma_tilde)], yv, tv, z)) - 1))
    out.append(check("outer row = (f(z), f(-z))", worst_row, 1e-10))
    out.append(check("det outer matrix = 1", worst_det, 1e-10))
    return out


# -------------------------------------------------------------- scattering


def soliton_datum(a: float = 0.25, gamma: float = 1.0, L: float = 60.0) -> InitialDatum:
    data = SolitonData(a, gamma)
    return InitialDatum.from_function(lambda x: q_of_x(data, x, 0.0), L=L)


def suite_scattering(seed: int = 0):
    rng = np.random.default_rng(seed)
    out = []
    datum = soliton_datum()
    spec = scatter(datum)
    out.append(Check("one eigenvalue found", len(spec.poles) == 1, f"{len(spec.poles)} poles"))
    if spec.poles:
        p = spec.poles[0]
        out.append(check("eigenvalue a", abs(p.a - 0.25), 1e-3))
        out.append(check("norming constant (relative)", abs(p.gamma - 1.0), 0.05))
    out.append(check("sup |r| for the soliton datum", float(np.max(np.abs(spec.r))), 1e-3))
    gauss = InitialDatum.from_function(lambda x: 0.01 * np.exp(-x * x), L=20)
    a, b = jost_pair(gauss, rng.uniform(0.05, 5, 20) * rng.choice([-1, 1], 20))
    out.append(check("unitarity |a|^2 - |b|^2 = 1", float(np.max(np.abs(np.abs(a) ** 2 - np.abs(b) ** 2 - 1))), 1e-8))
    return out


# ------------------------------------------------------------------ oracle


def oracle_run(t_final: float = 10.0, L: float = 100.0, N: int = 4096, dt: float = 0.01):
    data = SolitonData(0.25, 1.0)
    grid = GridSpec(L, N, dt)
    traj = evolve(q_of_x(data, grid.x, 0.0), grid, t_final)
    err = float(np.max(np.abs(traj.states[-1] - q_of_x(data, grid.x, t_final))))
    return err, traj.drift()


def suite_oracle(seed: int = 0):
    err, (dm, de) = oracle_run()
    return [
        check("pseudo-spectral vs parametric soliton at t = 10", err, 1e-3),
        check("mass drift", dm, 1e-6),
        check("energy drift", de, 1e-6),
    ]


# --------------------------------------------------------- asymptotic decay


@dataclass
class DecayExperiment:
    times: list
    errors: list
    slope: float
    spec: SpectralData
    soliton_region_error: float
    drift: tuple


def decay_experiment(eps: float = 0.05, times=(25, 50, 100, 200), window=(0.4, 1.6), dt: float = 0.025,
                     gauss_offset: float = -10.0, x0: float = -290.0) -> DecayExperiment:
    """Soliton (a = 1/4) plus a small Gaussian, evolved directly and compared with q(x, t | D_j0).

    The error is measured on the dispersive window window[0] <= x / t <= window[1]
    (coordinates relative to the soliton's initial position), the part of the
    case II sector that the soliton has left behind and away from the Airy
    transition at x / t = 2.
    """
    sol = SolitonData(0.25, 1.0)

    def q0(x):
        return q_of_x(sol, x, 0.0) + eps * np.exp(-((x - gauss_offset) ** 2))

    spec = scatter(InitialDatum.from_function(q0, L=60.0))
    grid = GridSpec(409.6, 8192, dt)
    traj = evolve(q0(grid.x - x0), grid, float(max(times)), times=list(times))
    xr = grid.x - x0
    errors = []
    for t in times:
        w = (xr >= window[0] * t) & (xr <= window[1] * t)
        xs, q = xr[w][::4], traj.at(t)[w][::4]
        lead = np.array([evaluate(spec, x, t).q_leading for x in xs])
        errors.append(float(np.max(np.abs(q - lead))))
    slope = decay_fit(times, errors, min_samples=len(times))
    t = 100 if 100 in times else times[-1]
    xs = np.arange(sol.speed * t - 8, sol.speed * t + 8, 0.25)
    ev = np.array([evaluate(spec, x, t).q_total for x in xs])
    num = np.interp(xs, xr, traj.at(t))
    return DecayExperiment(list(times), errors, slope, spec, float(np.max(np.abs(ev - num))), traj.drift())


def suite_asymptotic_decay(seed: int = 0):
    ex = decay_experiment()
    out = [Check("decay slope in [-0.75, -0.25]", -0.75 <= ex.slope <= -0.25, f"slope {ex.slope:.3f}")]
    out.append(check("soliton region |evaluate - pde| * t at t = 100", ex.soliton_region_error * 100, 5.0))
    return out


def suite_beta(seed: int = 0):
    """|beta|^2 = nu across random spectra, and exactly zero corrections for r = 0."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        amp = rng.uniform(0.05, 0.9)
        spec = synthetic_spectrum(amp=amp)
        xi = float(rng.choice([rng.uniform(0.05, 1.9), rng.uniform(-0.24, -0.01)]))
        info = phase.stationary_points(xi)
        co = local_coeffs(spec, info, rng.uniform(5, 500))
        for pc in co.points.values():
            worst = max(worst, abs(abs(pc.beta) ** 2 - pc.nu))
    out = [check("|beta|^2 = nu", worst, 1e-14)]
    empty = SpectralData([(0.25, 1.0)], np.array([-1.0, 1.0]), np.zeros(2))
    terms = correction_terms(empty, phase.stationary_points(1.0), 50.0)
    zero = not (np.any(terms.B0) or np.any(terms.B1) or terms.f1 or terms.f2 or terms.q_correction or terms.x_correction)
    out.append(Check("r = 0 gives zero corrections", zero, f"B0={terms.B0}, B1={terms.B1}"))
    return out


SUITES = {
    "phase": suite_phase,
    "weight": suite_weight,
    "soliton": suite_soliton,
    "scattering": suite_scattering,
    "oracle": suite_oracle,
    "asymptotic-decay": suite_asymptotic_decay,
    "beta": suite_beta,
}


def run_suite(name: str, seed: int = 0):
    start = time.perf_counter()
    checks = SUITES[name](seed)
    return checks, time.perf_counter() - start
