import numpy as np
import pytest

from ch_ist.errors import ConvergenceError, DataValidationError
from ch_ist.pde_oracle import GridSpec, conserved, decay_fit, evolve, residual
from ch_ist.soliton import SolitonData, q_of_x


def test_zero_datum_stays_zero():
    grid = GridSpec(20.0, 256, 0.01)
    traj = evolve(np.zeros(256), grid, 0.5)
    assert np.all(traj.states[-1] == 0)


def test_short_soliton_run():
    data = SolitonData(0.25, 1.0)
    grid = GridSpec(60.0, 2048, 0.01)
    traj = evolve(q_of_x(data, grid.x, 0.0), grid, 1.0, save_every=0.5)
    assert traj.times == pytest.approx([0.0, 0.5, 1.0])
    assert np.max(np.abs(traj.states[-1] - q_of_x(data, grid.x, 1.0))) < 1e-6
    dm, de = traj.drift()
    assert dm < 1e-8 and de < 1e-8


def test_conserved_of_gaussian():
    grid = GridSpec(20.0, 1024)
    q = np.exp(-grid.x**2)
    mass, energy = conserved(q, grid)
    # mass of q - q_xx is the integral of q; energy is int q^2 + q_x^2
    assert mass == pytest.approx(np.sqrt(np.pi), rel=1e-10)
    assert energy == pytest.approx(np.sqrt(np.pi / 2) * 2, rel=1e-10)


def test_residual_accepts_soliton_rejects_sech():
    data = SolitonData(0.25, 1.0)
    assert residual(lambda x, t: q_of_x(data, x, t), (-10, 10), (1, 2), nt=2) < 1e-4
    fake = lambda x, t: 0.5 / np.cosh(x - 2 * t) ** 2
    assert residual(fake, (-10, 10), (1, 2), nt=2) > 1e-2


def test_decay_fit_recovers_slope():
    t = np.array([10.0, 20, 40, 80, 160])
    assert decay_fit(t, 3 * t**-0.5) == pytest.approx(-0.5, abs=1e-12)
    assert decay_fit(t, 0.1 / t) == pytest.approx(-1.0, abs=1e-12)


@pytest.mark.parametrize(
    "t,err,kw",
    [
        ([1, 2, 4, 8], [1, 1, 1, 1], {}),
        ([1, 2, 3, 4, 5], [1, 1, 1, 1, 1], {}),
        ([1, 2, 4, 8, 16], [1, 0, 1, 1, 1], {}),
    ],
)
def test_decay_fit_rejects(t, err, kw):
    with pytest.raises(DataValidationError):
        decay_fit(t, err, **kw)


def test_grid_validation():
    with pytest.raises(DataValidationError):
        GridSpec(10.0, 1000)
    with pytest.raises(DataValidationError):
        GridSpec(-1.0, 256)


def test_evolve_input_checks():
    grid = GridSpec(20.0, 256, 0.01)
    with pytest.raises(DataValidationError):
        evolve(np.zeros(100), grid, 1.0)
    with pytest.raises(DataValidationError):
        evolve(np.ones(256), grid, 1.0)
    with pytest.raises(DataValidationError):
        evolve(50 * np.exp(-grid.x**2), grid, 1.0)  # CFL
    with pytest.raises(DataValidationError):
        evolve(np.zeros(256), grid, 0.005)


def test_boundary_contact_detected():
    data = SolitonData(0.3, 1.0)
    grid = GridSpec(50.0, 1024, 0.01)
    q0 = q_of_x(data, grid.x, 0.0)
    with pytest.raises(ConvergenceError):
        evolve(q0, grid, 20.0)
