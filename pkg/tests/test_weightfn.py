import math

import numpy as np
import pytest

from ch_ist import weightfn
from ch_ist.errors import DomainError
from ch_ist.phase import stationary_points
from ch_ist.scattering import SpectralData
from ch_ist.verification import plemelj_error, tt_identity_error


def test_nu_values(smooth_spec):
    assert weightfn.nu_exact(0.0) == 0
    assert weightfn.nu_exact(math.sqrt(1 - math.exp(-2 * math.pi))) == pytest.approx(1.0, abs=1e-12)
    s = np.linspace(-5, 5, 101)
    assert np.allclose(weightfn.nu(smooth_spec, s), weightfn.nu(smooth_spec, -s), atol=1e-15)
    assert np.all(weightfn.nu(smooth_spec, np.linspace(-8, 8, 2001)) >= 0)
    assert weightfn.nu(smooth_spec, 7.0) == 0  # outside the sampled range


def test_nu_interpolates_grid_values(smooth_spec):
    it = weightfn.nu(smooth_spec, smooth_spec.z)
    assert np.allclose(it, weightfn.nu_exact(smooth_spec.r), atol=1e-15)


def test_nu_rejects_supercritical():
    with pytest.raises(DomainError):
        weightfn.nu_exact(1.0)


def test_reflectionless_gives_unit_delta(reflectionless_spec):
    info = stationary_points(-1.0)
    assert weightfn.delta(reflectionless_spec, info, 0.3 + 0.2j) == 1
    empty = SpectralData([])
    assert weightfn.T(empty, info, 0.7 + 0.1j) == 1
    assert weightfn.T_expansion(empty, info) == (1, 0)


def test_single_pole_T_at_half():
    spec = SpectralData([(0.25, 1.0)])
    Th, T1 = weightfn.T_expansion(spec, stationary_points(1.0))
    assert Th == pytest.approx(3.0, abs=1e-14)
    # complex-step style oracle on log T
    h = 1e-7
    f = lambda z: np.log(weightfn.T(spec, stationary_points(1.0), z))
    assert T1 == pytest.approx((f(0.5j + h) - f(0.5j - h)) / (2 * h), abs=1e-8)
    assert T1 == pytest.approx(2j * 0.25 / (0.25 - 0.0625), abs=1e-14)


def test_blaschke_restricted_beyond_two():
    spec = SpectralData([(0.1, 1.0), (0.4, 1.0)])
    info = stationary_points(3.0)  # kappa0 ~ 0.289
    assert weightfn.blaschke_heights(spec, info) == [0.4]
    assert weightfn.blaschke_heights(spec, stationary_points(1.0)) == [0.1, 0.4]


def test_j0_factor_can_be_excluded():
    spec = SpectralData([(0.2, 1.0), (0.48, 1.0)])
    info = stationary_points(1.0)
    assert weightfn.blaschke_heights(spec, info, exclude_j0=True) == [0.2]


@pytest.mark.parametrize("xi", [-1.0, -0.1, 1.0])
def test_T_reflection_identity(smooth_spec, xi):
    assert tt_identity_error(smooth_spec, stationary_points(xi), n=40) < 1e-8


def test_T_tends_to_one(smooth_spec):
    info = stationary_points(-1.0)
    assert abs(weightfn.T(smooth_spec, info, 1e4 + 1e4j) - 1) < 1e-3


@pytest.mark.parametrize("xi", [-1.0, -0.1])
def test_plemelj(smooth_spec, xi):
    assert plemelj_error(smooth_spec, stationary_points(xi)) < 1e-10


def test_T_at_half_real_for_symmetric_data(smooth_spec):
    Th, T1 = weightfn.T_expansion(smooth_spec, stationary_points(0.5))
    assert abs(Th.imag) < 1e-12 and Th.real > 0
    assert abs(T1.real) < 1e-12


def test_T1_against_finite_difference(smooth_spec):
    info = stationary_points(-0.1)
    _, T1 = weightfn.T_expansion(smooth_spec, info)
    h = 1e-5
    f = lambda z: np.log(weightfn.T(smooth_spec, info, z))
    assert abs(T1 - (f(0.5j + h) - f(0.5j - h)) / (2 * h)) < 1e-8


@pytest.mark.parametrize("xi", [1.0, -0.1])
def test_local_limits(smooth_spec, xi):
    info = stationary_points(xi)
    for k in info.points:
        lim = weightfn.local_limit(smooth_spec, info, k)
        assert abs(abs(lim.Tk) - 1) < 1e-8
        assert lim.nu_k == pytest.approx(float(weightfn.nu(smooth_spec, lim.xi_k)))
        ratios = []
        for m in range(2, 7):
            z = lim.xi_k + 10.0**-m * np.exp(1j * np.pi / 4)
            diff = abs(weightfn.T(smooth_spec, info, z) - lim.Tk * lim.power(z))
            ratios.append(diff / 10 ** (-m / 2))
        assert max(ratios) < 1.0
        assert ratios[-1] < ratios[0]


def test_local_limit_trivial():
    spec = SpectralData([])
    lim = weightfn.local_limit(spec, stationary_points(1.0), 2)
    assert lim.Tk == 1 and lim.nu_k == 0


def test_local_limit_bad_label(smooth_spec):
    with pytest.raises(DomainError):
        weightfn.local_limit(smooth_spec, stationary_points(1.0), 1)


def test_evaluate_weights(smooth_spec):
    w = weightfn.evaluate_weights(smooth_spec, stationary_points(-0.1))
    assert set(w.local) == {1, 2, 3, 4}
    assert abs(w.T_at_i_half) > 0


def test_exact_pv_oracle_against_quadpack():
    from scipy.integrate import quad
    from scipy.interpolate import PchipInterpolator

    from ch_ist.verification import piecewise_cubic_pv

    x = np.linspace(-2, 2, 17)
    pp = PchipInterpolator(x, np.exp(-x * x))
    for s in (0.25, 0.3, 1.7):
        ps = float(pp(s))
        smooth = quad(lambda u: 0.0 if u == s else (pp(u) - ps) / (u - s), -2, 2, points=list(x) + [s], limit=200)[0]
        ref = smooth + ps * np.log((2 - s) / (2 + s))
        assert piecewise_cubic_pv(pp, -2, 2, s) == pytest.approx(ref, abs=1e-11)
    assert piecewise_cubic_pv(pp, -2, 0, 1.0) == pytest.approx(quad(lambda u: pp(u) / (u - 1), -2, 0)[0], abs=1e-12)


@pytest.mark.parametrize("xi", [-1.0, -0.1, 1.0])
def test_T_normalised_at_infinity(smooth_spec, xi):
    info = stationary_points(xi)
    dev = [abs(weightfn.T(smooth_spec, info, R * np.exp(1j * np.pi / 3)) - 1) for R in (10, 100, 1000)]
    assert dev[0] > dev[1] > dev[2]
    assert max(d * R for d, R in zip(dev, (10, 100, 1000))) < 1.0  # O(1/R)


def test_T_reflection_symmetry(smooth_spec):
    info = stationary_points(-0.1)
    for z in (0.3 + 0.4j, -1.2 + 0.1j, 2.5 - 0.7j):
        assert abs(np.conj(weightfn.T(smooth_spec, info, np.conj(z))) - weightfn.T(smooth_spec, info, -z)) < 1e-12
