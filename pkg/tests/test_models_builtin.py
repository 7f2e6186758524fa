"""Built-in model formulas and their invariants."""

import numpy as np
import pytest

from smcest import (ConfigurationError, NumericsWarning, PrecessionModel,
                    RandomizedBenchmarkingModel, multicos_likelihood,
                    precession_likelihood, rb_fidelity, rb_likelihood,
                    rebit_likelihood)


def test_precession_values():
    assert precession_likelihood(0.5, 0.0) == 1.0
    assert precession_likelihood(1.0, np.pi) == pytest.approx(0.0, abs=1e-30)
    # direct evaluation: cos^2(pi / 4) = 1/2
    assert precession_likelihood(0.5, np.pi) == pytest.approx(0.5)
    with pytest.raises(ConfigurationError):
        precession_likelihood(0.5, -1.0)


def test_precession_periodicity():
    rng = np.random.default_rng(0)
    for _ in range(20):
        omega = rng.uniform(0.05, 1.0)
        t = rng.uniform(0, 10)
        a = precession_likelihood(omega, t)
        b = precession_likelihood(omega, t + 2 * np.pi / omega)
        assert abs(a - b) < 1e-12


def test_multicos_values():
    assert multicos_likelihood(0.3, 0.8, 0.0, 0.0) == 1.0
    # first factor kills the product at w1 t1 = pi
    assert multicos_likelihood(1.0, 0.8, np.pi, 2.0) == pytest.approx(0.0, abs=1e-30)
    assert multicos_likelihood(0.5, 0.5, np.pi, np.pi) == pytest.approx(0.25)


def test_rb_values():
    # long-sequence limit approaches the offset
    assert rb_likelihood(0.95, 0.5, 0.5, 2000) == pytest.approx(0.5, abs=1e-15)
    assert rb_likelihood(1.0, 0.3, 0.55, 17) == pytest.approx(0.85)
    # direct evaluation: 0.5 * 0.95^2 + 0.5
    assert rb_likelihood(0.95, 0.5, 0.5, 2) == pytest.approx(0.95125)
    with pytest.raises(ConfigurationError):
        rb_likelihood(0.95, 0.5, 0.5, 0)


def test_rb_monotone_in_sequence_length():
    ms = np.arange(1, 500)
    values = rb_likelihood(0.97, 0.4, 0.3, ms)
    assert np.all(np.diff(values) <= 0)


def test_rb_clamp_warns_on_drift():
    with pytest.warns(NumericsWarning):
        out = rb_likelihood(0.9, 0.9, 0.9, 1)
    assert out == 1.0


def test_rb_fidelity():
    assert rb_fidelity(1.0, 2) == 1.0
    assert rb_fidelity(0.0, 2) == 0.5
    # inversion of p = (d F - 1) / (d - 1) at p = 0.95, d = 2
    assert rb_fidelity(0.95, 2) == pytest.approx(0.975)
    with pytest.raises(ConfigurationError):
        rb_fidelity(0.9, 1)


def test_rb_validity_region():
    model = RandomizedBenchmarkingModel()
    valid = model.are_models_valid
    assert valid([[0.95, 0.5, 0.5]])[0]
    assert not valid([[1.2, 0.5, 0.4]])[0]
    assert not valid([[0.9, 0.7, 0.4]])[0]   # A + B > 1
    assert not valid([[0.9, -0.1, 0.4]])[0]


def test_rebit_values():
    assert rebit_likelihood(0.0, 0.0, [0.0, 1.0]) == 0.5
    assert rebit_likelihood(0.0, 1.0, [0.0, 1.0]) == 1.0
    assert rebit_likelihood(1.0, 0.0, [0.0, 1.0]) == 0.5
    with pytest.raises(ConfigurationError):
        rebit_likelihood(0.0, 0.0, [0.5, 0.5])


def test_rebit_probability_in_unit_interval_everywhere():
    rng = np.random.default_rng(1)
    for _ in range(200):
        r = np.sqrt(rng.random())
        phi = rng.uniform(0, 2 * np.pi)
        x, z = r * np.cos(phi), r * np.sin(phi)
        theta = rng.uniform(0, 2 * np.pi)
        p = rebit_likelihood(x, z, [np.cos(theta), np.sin(theta)])
        assert 0.0 <= p <= 1.0


def test_precession_validity_follows_configured_support():
    model = PrecessionModel(freq_min=0.2, freq_max=0.8)
    assert not model.are_models_valid([[0.1]])[0]
    assert model.are_models_valid([[0.5]])[0]
    unbounded = PrecessionModel(freq_min=-np.inf, freq_max=np.inf)
    assert unbounded.are_models_valid([[123.0]])[0]
