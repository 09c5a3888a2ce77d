import json

import numpy as np
import pytest

from ch_ist.errors import DataValidationError
from ch_ist.scattering import (
    InitialDatum, Pole, SpectralData, discrete_spectrum, jost_pair, reflection_coefficient, scatter,
)
from ch_ist.soliton import SolitonData, q_of_x


@pytest.fixture(scope="module")
def soliton_datum():
    data = SolitonData(0.25, 1.0)
    return InitialDatum.from_function(lambda x: q_of_x(data, x, 0.0), L=60)


@pytest.fixture(scope="module")
def gauss():
    return InitialDatum.from_function(lambda x: 0.01 * np.exp(-x * x), L=20)


def test_free_problem():
    datum = InitialDatum.from_function(lambda x: 0 * x, L=10)
    a, b = jost_pair(datum, np.array([0.3, -1.2, 2.5]))
    assert np.allclose(a, 1, atol=1e-12) and np.allclose(b, 0, atol=1e-12)
    z, r = reflection_coefficient(datum, [-1.0, -0.5, 0.5, 1.0])
    assert np.all(r == 0)
    assert discrete_spectrum(datum) == []


def test_unitarity(gauss):
    z = np.random.default_rng(3).uniform(-5, 5, 30)
    a, b = jost_pair(gauss, z)
    assert np.max(np.abs(np.abs(a) ** 2 - np.abs(b) ** 2 - 1)) < 1e-8


def test_gaussian_reflection_is_subcritical_and_symmetric(gauss):
    z, r = reflection_coefficient(gauss, np.linspace(-4, 4, 40))
    assert np.max(np.abs(r)) < 1
    assert np.max(np.abs(r)) > 0
    assert np.allclose(r[::-1], np.conj(r), atol=0)


def test_reflectionless_soliton(soliton_datum):
    z, r = reflection_coefficient(soliton_datum, np.linspace(-3, 3, 24))
    assert np.max(np.abs(r)) < 1e-3


@pytest.mark.parametrize("gamma", [1.0, 3.0])
def test_soliton_roundtrip(gamma):
    data = SolitonData(0.25, gamma)
    datum = InitialDatum.from_function(lambda x: q_of_x(data, x, 0.0), L=60)
    (pole,) = discrete_spectrum(datum)
    assert abs(pole.a - 0.25) < 1e-3
    assert abs(pole.gamma / gamma - 1) < 0.05


def test_roundtrip_other_height():
    data = SolitonData(0.4, 0.5)
    datum = InitialDatum.from_function(lambda x: q_of_x(data, x, 0.0), L=60)
    (pole,) = discrete_spectrum(datum)
    assert pole.a == pytest.approx(0.4, abs=1e-6)
    assert pole.gamma == pytest.approx(0.5, rel=1e-4)


def test_deeper_datum_keeps_eigenvalues():
    bump = lambda x: 0.3 * np.exp(-x * x / 4)
    one = discrete_spectrum(InitialDatum.from_function(bump, L=30))
    two = discrete_spectrum(InitialDatum.from_function(lambda x: 2 * bump(x), L=30))
    assert len(two) >= len(one) >= 1


def test_invalid_data_rejected():
    x = np.linspace(-10, 10, 201)
    with pytest.raises(DataValidationError):
        InitialDatum(x, np.ones_like(x))  # no decay
    with pytest.raises(DataValidationError):
        InitialDatum(x, -3 * np.exp(-x * x))  # m becomes negative
    with pytest.raises(DataValidationError):
        InitialDatum(x ** 3, np.zeros_like(x))  # non-uniform
    with pytest.raises(DataValidationError):
        SpectralData([], np.array([-1.0, 1.0]), np.array([1.0, 1.0]))
    with pytest.raises(DataValidationError):
        SpectralData([(0.6, 1.0)])
    with pytest.raises(DataValidationError):
        SpectralData([(0.2, 1.0), (0.2, 2.0)])
    with pytest.raises(DataValidationError):
        SpectralData([(0.2, -1.0)])


def test_symmetry_enforced_on_ingest():
    spec = SpectralData([], np.array([-1.0, 1.0, 2.0]), np.array([0.1 + 0.3j, 0.3 + 0.1j, 0.2j]))
    assert np.array_equal(spec.z, [-2.0, -1.0, 1.0, 2.0])
    assert spec.r[2] == pytest.approx(0.5 * ((0.3 + 0.1j) + np.conj(0.1 + 0.3j)))
    assert np.allclose(spec.r[::-1], np.conj(spec.r))


def test_json_roundtrip(tmp_path):
    spec = SpectralData([Pole(0.25, 1.5)], np.array([-1.0, 1.0]), np.array([0.1 - 0.2j, 0.1 + 0.2j]))
    path = tmp_path / "spec.json"
    spec.save(path)
    obj = json.loads(path.read_text())
    assert obj["kappa"] == 1 and obj["poles"] == [{"a": 0.25, "gamma": 1.5}]
    back = SpectralData.load(path)
    assert back.poles == spec.poles
    assert np.array_equal(back.r, spec.r)


def test_csv_datum(tmp_path):
    x = np.linspace(-20, 20, 801)
    path = tmp_path / "q0.csv"
    np.savetxt(path, np.c_[x, 0.02 * np.exp(-x * x)], delimiter=",", header="x,q0", comments="")
    datum = InitialDatum.from_csv(path)
    assert datum.L == 20 and datum.m0.min() > 0


def test_refinement_changes_r_little(gauss):
    coarse = InitialDatum.from_function(lambda x: 0.01 * np.exp(-x * x), L=20, h=1 / 32)
    z = np.array([0.5, 1.0, 2.0])
    _, r_fine = reflection_coefficient(gauss, z)
    _, r_coarse = reflection_coefficient(coarse, z)
    assert np.max(np.abs(r_fine - r_coarse)) < 1e-5 * np.max(np.abs(r_fine)) + 1e-10


def test_scatter_pipeline(soliton_datum):
    spec = scatter(soliton_datum, np.linspace(-2, 2, 8))
    assert len(spec.poles) == 1
    assert np.max(np.abs(spec.r)) < 1e-3


def test_symmetrize_merges_rounding_noise_mirrors():
    from ch_ist.scattering import symmetrize
    z = np.array([-2.950000000000001, -1.0, 1.0, 2.9499999999999997])
    r = np.array([0.1 - 0.2j, 0.3, 0.3, 0.1 + 0.2j])
    zs, rs = symmetrize(z, r)
    assert zs.size == 4
    assert np.allclose(rs[::-1], np.conj(rs))
