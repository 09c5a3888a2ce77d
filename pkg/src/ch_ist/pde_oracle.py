"""Direct pseudo-spectral integration of the CH equation and a PDE residual checker.

The evolved variable is w = q - q_xx, which satisfies the conservation law

    w_t = -d/dx [2 q + 3/2 q^2 - 1/2 q_x^2 - q q_xx].

q is recovered from w by dividing by 1 + k^2 in Fourier space.  Products are
dealiased with the 2/3 rule and time stepping is classical RK4.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DataValidationError

TAIL_TOL = 1e-6


@dataclass(frozen=True)
class GridSpec:
    L: float = 100.0
    N: int = 4096
    dt: float = 0.01
    dealias: float = 2.0 / 3.0

    def __post_init__(self):
        if self.N < 256 or self.N & (self.N - 1):
            raise DataValidationError("N must be a power of two, at least 256")
        if not (self.L > 0 and self.dt > 0 and 0 < self.dealias <= 1):
            raise DataValidationError("L, dt must be positive and dealias in (0, 1]")

    @property
    def dx(self) -> float:
        return 2 * self.L / self.N

    @property
    def x(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.N)

    @property
    def k(self) -> np.ndarray:
        return 2 * np.pi * np.fft.rfftfreq(self.N, d=self.dx)


@dataclass
class Trajectory:
    x: np.ndarray
    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    mass: list = field(default_factory=list)
    energy: list = field(default_factory=list)

    def drift(self):
        """Largest relative change of (mass, energy) over the run."""
        def rel(v):
            v = np.asarray(v)
            ref = v[0] if v[0] != 0 else 1.0
            return float(np.max(np.abs(v / ref - 1))) if v[0] != 0 else float(np.max(np.abs(v)))
        return rel(self.mass), rel(self.energy)

    def at(self, t: float) -> np.ndarray:
        i = int(np.argmin(np.abs(np.asarray(self.times) - t)))
        return self.states[i]


class CHSolver:
    def __init__(self, grid: GridSpec):
        self.grid = grid
        k = grid.k
        self.ik = 1j * k
        self.helm = 1.0 + k**2
        self.mask = k <= grid.dealias * k.max()

    def q_hat(self, w_hat):
        return w_hat / self.helm

    def rhs(self, w_hat):
        n = self.grid.N
        qh = self.q_hat(w_hat) * self.mask
        q = np.fft.irfft(qh, n)
        qx = np.fft.irfft(self.ik * qh, n)
        qxx = np.fft.irfft(self.ik**2 * qh, n)
        flux = np.fft.rfft(1.5 * q * q - 0.5 * qx * qx - q * qxx) * self.mask + 2 * qh
        return -self.ik * flux

    def step(self, w_hat, dt):
        k1 = self.rhs(w_hat)
        k2 = self.rhs(w_hat + 0.5 * dt * k1)
        k3 = self.rhs(w_hat + 0.5 * dt * k2)
        k4 = self.rhs(w_hat + dt * k3)
        return w_hat + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    def invariants(self, w_hat):
        n, dx = self.grid.N, self.grid.dx
        qh = self.q_hat(w_hat)
        q = np.fft.irfft(qh, n)
        qx = np.fft.irfft(self.ik * qh, n)
        w = np.fft.irfft(w_hat, n)
        return float(np.sum(w) * dx), float(np.sum(q * q + qx * qx) * dx)


def evolve(q0, grid: GridSpec, t_final: float, save_every: float = None, times=None,
           tail_tol: float = TAIL_TOL) -> Trajectory:
    """Integrate from q0 (samples on grid.x) to t_final; states are stored at ``times``
    (or every ``save_every``, or only at the ends)."""
    q0 = np.asarray(q0, float)
    if q0.shape != (grid.N,):
        raise DataValidationError(f"q0 must have {grid.N} samples")
    if max(abs(q0[0]), abs(q0[-1])) > 1e-10:
        raise DataValidationError("q0 must decay at the domain ends")
    q_max0 = float(np.max(np.abs(q0)))
    if q_max0 > 0 and grid.dt > 0.5 * grid.dx / q_max0 + 1e-12:
        raise DataValidationError("time step violates the advective CFL bound dt <= dx / (2 max|q|)")
    solver = CHSolver(grid)
    n_steps = int(round(t_final / grid.dt))
    if abs(n_steps * grid.dt - t_final) > 1e-9 * max(1.0, t_final):
        raise DataValidationError("t_final must be a multiple of dt")
    if times is None:
        if save_every is None:
            times = [0.0, t_final]
        else:
            times = list(np.arange(0.0, t_final + 0.5 * save_every, save_every))
    save_steps = {int(round(t / grid.dt)) for t in times}
    w_hat = np.fft.rfft(q0) * solver.helm
    traj = Trajectory(grid.x)
    edge = max(1, grid.N // 64)

    def record(step, wh):
        q = np.fft.irfft(solver.q_hat(wh), grid.N)
        mass, energy = solver.invariants(wh)
        traj.times.append(step * grid.dt)
        traj.states.append(q)
        traj.mass.append(mass)
        traj.energy.append(energy)
        return q

    record(0, w_hat)
    for step in range(1, n_steps + 1):
        w_hat = solver.step(w_hat, grid.dt)
        if step in save_steps or step % 50 == 0 or step == n_steps:
            q = np.fft.irfft(solver.q_hat(w_hat), grid.N)
            qm = float(np.max(np.abs(q)))
            if not np.isfinite(qm) or (q_max0 > 0 and qm > 1e3 * q_max0):
                raise ConvergenceError(f"blow-up detected at t = {step * grid.dt:.4g}")
            if max(np.max(np.abs(q[:edge])), np.max(np.abs(q[-edge:]))) > tail_tol:
                raise ConvergenceError(f"solution reached the domain boundary at t = {step * grid.dt:.4g}")
            if qm > 0 and grid.dt > 0.5 * grid.dx / qm + 1e-12:
                raise ConvergenceError("CFL bound violated during the run")
            if step in save_steps or step == n_steps:
                record(step, w_hat)
    return traj


def conserved(q, grid: GridSpec):
    solver = CHSolver(grid)
    return solver.invariants(np.fft.rfft(np.asarray(q, float)) * solver.helm)


# ------------------------------------------------------------------ residual


def residual(q_fn, x_range, t_range, h: float = 1e-2, nx: int = 41, nt: int = 5) -> float:
    """Sup-norm of q_t - q_xxt + 2q_x + 3qq_x - 2q_x q_xx - q q_xxx on a box.

    Spatial derivatives use fourth-order centred stencils, time derivatives
    second-order ones.  q_fn(x, t) must accept arrays of x.
    """
    xs = np.linspace(*x_range, nx)
    worst = 0.0
    off = np.arange(-3, 4) * h
    X = xs[:, None] + off[None, :]
    for t in np.linspace(*t_range, nt):
        F = {dt: np.asarray(q_fn(X.ravel(), t + dt), float).reshape(X.shape) for dt in (-h, 0.0, h)}
        f = F[0.0]
        q = f[:, 3]
        qx = (f[:, 1] - 8 * f[:, 2] + 8 * f[:, 4] - f[:, 5]) / (12 * h)
        qxx = (-f[:, 1] + 16 * f[:, 2] - 30 * f[:, 3] + 16 * f[:, 4] - f[:, 5]) / (12 * h * h)
        qxxx = (f[:, 0] - 8 * f[:, 1] + 13 * f[:, 2] - 13 * f[:, 4] + 8 * f[:, 5] - f[:, 6]) / (8 * h**3)
        qt = (F[h][:, 3] - F[-h][:, 3]) / (2 * h)

        def d2(g):
            return (-g[:, 1] + 16 * g[:, 2] - 30 * g[:, 3] + 16 * g[:, 4] - g[:, 5]) / (12 * h * h)

        qxxt = (d2(F[h]) - d2(F[-h])) / (2 * h)
        res = qt - qxxt + 2 * qx + 3 * q * qx - 2 * qx * qxx - q * qxxx
        worst = max(worst, float(np.max(np.abs(res))))
    return worst


def decay_fit(t, err, min_samples: int = 5, min_span: float = 8.0) -> float:
    """Least-squares slope of log(err) against log(t)."""
    t = np.asarray(t, float)
    err = np.asarray(err, float)
    if t.size != err.size or t.size < min_samples:
        raise DataValidationError(f"need matching series with at least {min_samples} samples")
    if np.any(err <= 0) or np.any(t <= 0):
        raise DataValidationError("times and errors must be positive")
    if t.max() < min_span * t.min():
        raise DataValidationError(f"times must span a factor of at least {min_span}")
    return float(np.polyfit(np.log(t), np.log(err), 1)[0])
