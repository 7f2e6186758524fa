"""Updater behavior: weight updates, summaries, evidence, snapshots."""

import numpy as np
import pytest

from smcest import (ConfigurationError, DegeneracyError,
                    ImpoverishmentWarning, NormalDistribution,
                    PrecessionModel, SMCUpdater, SmcestError,
                    UniformDistribution)

from conftest import (BinIndicatorModel, ConstantLikelihoodModel,
                      IdentityLikelihoodModel)


def uniform_updater(n=2000, seed=1, **kwargs):
    return SMCUpdater(PrecessionModel(), n, UniformDistribution([0, 1]),
                      np.random.default_rng(seed), **kwargs)


def place_particles(updater, locations, weights=None):
    locations = np.atleast_2d(np.asarray(locations, dtype=float))
    if locations.shape[0] == 1 and locations.shape[1] > 1:
        locations = locations.T
    n = len(locations)
    updater.weights = np.full(n, 1.0 / n) if weights is None \
        else np.asarray(weights, dtype=float)
    updater.locations = locations
    updater.n_ess_initial = float(n)
    updater._min_ess = float(n)
    return updater


def test_init_ess_equals_n_exactly():
    assert uniform_updater(2000).ess() == 2000.0


def test_init_is_seed_deterministic():
    a = uniform_updater(500, seed=9)
    b = uniform_updater(500, seed=9)
    assert np.array_equal(a.locations, b.locations)
    assert np.array_equal(a.weights, b.weights)


def test_init_rejects_incompatible_prior():
    with pytest.raises(ConfigurationError):
        SMCUpdater(PrecessionModel(), 100, UniformDistribution([2, 3]),
                   np.random.default_rng(0), max_init_retries=50)


def test_init_rejection_resamples_invalid_draws():
    # Prior straddles the validity boundary; init must end fully valid.
    updater = SMCUpdater(PrecessionModel(), 2000,
                         UniformDistribution([-1, 1]),
                         np.random.default_rng(3))
    assert np.all(updater.locations >= 0.0)
    assert np.all(updater.locations <= 1.0)


def test_update_hand_arithmetic():
    model = IdentityLikelihoodModel()
    updater = SMCUpdater(model, 2, UniformDistribution([0, 1]),
                         np.random.default_rng(0), resampler=None)
    place_particles(updater, [[0.2], [0.6]])
    updater.update(0, model.experiment(dummy=0))
    assert updater.normalization_record[0] == pytest.approx(0.4, abs=1e-15)
    assert updater.weights == pytest.approx([0.25, 0.75], abs=1e-15)
    assert updater.data_count == 1


def test_uninformative_datum_leaves_weights_unchanged():
    model = ConstantLikelihoodModel(p0=0.3)
    updater = SMCUpdater(model, 4, UniformDistribution([0, 1]),
                         np.random.default_rng(0), resampler=None)
    place_particles(updater, [[0.1], [0.2], [0.3], [0.4]],
                    weights=[0.4, 0.3, 0.2, 0.1])
    before = updater.weights.copy()
    updater.update(0, model.experiment(dummy=0))
    assert np.allclose(updater.weights, before, atol=1e-15)
    assert updater.normalization_record[0] == pytest.approx(0.3, abs=1e-15)


def test_degenerate_update_raises_naming_datum():
    model = BinIndicatorModel(10)
    updater = SMCUpdater(model, 50, UniformDistribution([0, 0.1]),
                         np.random.default_rng(0), resampler=None)
    # all particles live in bin 0; bin 7 is impossible
    with pytest.raises(DegeneracyError, match="datum 7"):
        updater.update(7, model.experiment(dummy=0))


def test_ess_spot_values():
    updater = uniform_updater(4)
    place_particles(updater, [[0.1], [0.2], [0.3], [0.4]])
    assert updater.ess() == 4.0
    place_particles(updater, [[0.1], [0.2], [0.3], [0.4]],
                    weights=[0.5, 0.5, 0.0, 0.0])
    assert updater.ess() == 2.0
    place_particles(updater, [[0.1], [0.2], [0.3], [0.4]],
                    weights=[1.0, 0.0, 0.0, 0.0])
    assert updater.ess() == 1.0


def test_est_mean_trivial_cases():
    updater = uniform_updater(2)
    place_particles(updater, [[0.0], [1.0]])
    assert updater.est_mean()[0] == pytest.approx(0.5, abs=1e-15)
    place_particles(updater, [[0.0], [1.0]], weights=[0.25, 0.75])
    assert updater.est_mean()[0] == pytest.approx(0.75, abs=1e-15)


def test_est_covariance_trivial_and_reference():
    updater = uniform_updater(3)
    place_particles(updater, [[0.4], [0.4], [0.4]])
    assert np.allclose(updater.est_covariance(), 0.0, atol=1e-30)
    place_particles(updater, [[-1.0], [1.0]])
    assert updater.est_covariance()[0, 0] == pytest.approx(1.0, abs=1e-15)
    # reference two-pass computation on a random 3-parameter filter
    rng = np.random.default_rng(12)
    w = rng.random(200)
    w /= w.sum()
    x = rng.normal(size=(200, 3))
    mean = np.einsum("i,ij->j", w, x)
    ref = np.zeros((3, 3))
    for i in range(200):
        d = x[i] - mean
        ref += w[i] * np.outer(d, d)
    model3 = ConstantLikelihoodModel()

    class ThreeParam(ConstantLikelihoodModel):
        @property
        def n_modelparams(self):
            return 3

    updater = SMCUpdater(ThreeParam(), 200,
                         UniformDistribution([[0, 1]] * 3),
                         np.random.default_rng(0), resampler=None)
    place_particles(updater, x, weights=w)
    got = updater.est_covariance()
    assert np.allclose(got, ref, atol=1e-12)
    assert np.allclose(got, got.T, atol=0)
    assert np.linalg.eigvalsh(got).min() > -1e-10
    del model3


def test_log_evidence_trivial_cases():
    updater = uniform_updater(10)
    assert updater.log_evidence() == 0.0
    model = ConstantLikelihoodModel(p0=0.4)
    updater = SMCUpdater(model, 10, UniformDistribution([0, 1]),
                         np.random.default_rng(0), resampler=None)
    updater.update(0, model.experiment(dummy=0))
    assert updater.log_evidence() == pytest.approx(np.log(0.4), abs=1e-12)


def test_bayes_factor_requires_data():
    a, b = uniform_updater(10), uniform_updater(10)
    with pytest.raises(SmcestError):
        a.bayes_factor(b)


@pytest.mark.filterwarnings("ignore::smcest.ImpoverishmentWarning")
def test_bayes_factor_favors_true_model():
    # Statistical oracle: the evidence under a prior containing the truth
    # should beat the evidence of a wrong fixed frequency.
    model = PrecessionModel()
    wins = 0
    for trial in range(100):
        rng = np.random.default_rng(1000 + trial)
        true_omega = rng.uniform(0.2, 0.8)
        good = SMCUpdater(model, 500, UniformDistribution([0, 1]),
                          np.random.default_rng(trial), resampler=None)
        wrong_omega = (true_omega + 0.25) % 1.0
        bad = SMCUpdater(model, 2, NormalDistribution(wrong_omega, 0.0),
                         np.random.default_rng(trial), resampler=None)
        for k in range(100):
            e = model.experiment(t=(9 / 8) ** (k % 40))
            d = model.simulate_experiment([[true_omega]], e, rng)
            good.update(d, e)
            bad.update(d, e)
        if good.bayes_factor(bad) > 1.0:
            wins += 1
    assert wins >= 95


def riemann_bayes(times, data, n_cells):
    """Dense numerical integration of the exact Bayes rule on [0, 1].

    Independent of the package: direct midpoint-rule evaluation of the
    posterior mean, variance, and log marginal likelihood.
    """
    edges = np.linspace(0.0, 1.0, n_cells + 1)
    omega = (edges[:-1] + edges[1:]) / 2.0
    mass = np.full(n_cells, 1.0 / n_cells)
    log_evidence = 0.0
    for t, d in zip(times, data):
        pr0 = np.cos(omega * t / 2.0) ** 2
        like = pr0 if d == 0 else 1.0 - pr0
        unnorm = mass * like
        total = unnorm.sum()
        log_evidence += np.log(total)
        mass = unnorm / total
    mean = float(mass @ omega)
    var = float(mass @ (omega - mean) ** 2)
    return mean, var, log_evidence


def simulate_precession_sequence(true_omega=0.5, n_data=50, seed=123):
    model = PrecessionModel()
    rng = np.random.default_rng(seed)
    times = [(9 / 8) ** k for k in range(n_data)]
    data = [model.simulate_experiment([[true_omega]], model.experiment(t=t), rng)
            for t in times]
    return times, data


def test_grid_oracle_equivalence():
    # Grid-placed particles with resampling disabled reproduce dense
    # numerical integration of the Bayes rule.
    times, data = simulate_precession_sequence()
    n = 10_000
    model = PrecessionModel()
    updater = SMCUpdater(model, n, UniformDistribution([0, 1]),
                         np.random.default_rng(0), resampler=None)
    edges = np.linspace(0.0, 1.0, n + 1)
    place_particles(updater, ((edges[:-1] + edges[1:]) / 2.0)[:, np.newaxis])
    for t, d in zip(times, data):
        updater.update(d, model.experiment(t=t))
    oracle_mean, oracle_var, oracle_logev = riemann_bayes(times, data, 1_000_000)
    assert updater.est_mean()[0] == pytest.approx(oracle_mean, rel=1e-3)
    assert updater.est_covariance()[0, 0] == pytest.approx(oracle_var, rel=1e-3)
    assert updater.log_evidence() == pytest.approx(oracle_logev, rel=1e-3)


def test_hypothetical_update_variance_uninformative():
    model = ConstantLikelihoodModel(p0=0.5)
    updater = SMCUpdater(model, 100, UniformDistribution([0, 1]),
                         np.random.default_rng(0), resampler=None)
    current = float(np.trace(updater.est_covariance()))
    hypothetical = updater.hypothetical_update_variance(
        model.experiment(dummy=0))
    assert hypothetical == pytest.approx(current, rel=1e-12)


def test_hypothetical_update_variance_delta_posterior():
    model = BinIndicatorModel(10)
    updater = SMCUpdater(model, 2, UniformDistribution([0, 1]),
                         np.random.default_rng(0), resampler=None)
    place_particles(updater, [[0.05], [0.75]])
    assert updater.hypothetical_update_variance(
        model.experiment(dummy=0)) == pytest.approx(0.0, abs=1e-30)


def test_hypothetical_update_variance_two_particle_hand_case():
    # Enumerated analytically: outcomes 0/1 with Pr 0.4/0.6 give posterior
    # variances 0.03 and 8/225, so the expectation is exactly 1/30.
    model = IdentityLikelihoodModel()
    updater = SMCUpdater(model, 2, UniformDistribution([0, 1]),
                         np.random.default_rng(0), resampler=None)
    place_particles(updater, [[0.2], [0.6]])
    got = updater.hypothetical_update_variance(model.experiment(dummy=0))
    assert got == pytest.approx(1.0 / 30.0, rel=1e-12)


def test_impoverishment_warning():
    model = BinIndicatorModel(2)
    updater = SMCUpdater(model, 30, UniformDistribution([0, 1]),
                         np.random.default_rng(4), resampler=None)
    # force all mass onto the particles in bin 1
    with pytest.warns(ImpoverishmentWarning):
        place_particles(updater, np.concatenate([
            np.full(29, 0.25), [0.75]])[:, np.newaxis])
        updater.update(1, model.experiment(dummy=0))
    assert updater.min_ess_observed == pytest.approx(1.0)


def test_update_mutates_nothing_but_weights_without_kernel():
    updater = uniform_updater(200, resampler=None)
    locations_before = updater.locations.copy()
    model = updater.model
    updater.update(0, model.experiment(t=0.5))
    assert np.array_equal(updater.locations, locations_before)
    assert len(updater.weights) == 200


def test_resample_triggers_and_restores_ess():
    updater = uniform_updater(400, seed=5)
    model = updater.model
    rng = np.random.default_rng(99)
    for k in range(60):
        e = model.experiment(t=(9 / 8) ** k)
        d = model.simulate_experiment([[0.5]], e, rng)
        updater.update(d, e)
    assert updater.n_resamples >= 1
    assert updater.min_ess_observed < 400.0


def test_weights_remain_normalized():
    updater = uniform_updater(300, seed=6)
    model = updater.model
    rng = np.random.default_rng(7)
    for k in range(40):
        e = model.experiment(t=(9 / 8) ** k)
        updater.update(model.simulate_experiment([[0.7]], e, rng), e)
        assert abs(updater.weights.sum() - 1.0) < 1e-10
        assert 1.0 <= updater.ess() <= updater.n_particles * (1 + 1e-12)


def test_snapshot_roundtrip_bit_exact(tmp_path):
    updater = uniform_updater(150, seed=8)
    model = updater.model
    rng = np.random.default_rng(9)
    for k in range(20):
        e = model.experiment(t=(9 / 8) ** k)
        updater.update(model.simulate_experiment([[0.4]], e, rng), e)
    path = tmp_path / "state.npz"
    updater.save_state(path)
    restored = SMCUpdater.load_state(PrecessionModel(), path)
    assert np.array_equal(restored.weights, updater.weights)
    assert np.array_equal(restored.locations, updater.locations)
    assert np.array_equal(restored.normalization_record,
                          updater.normalization_record)
    assert restored.data_count == updater.data_count
    assert restored.min_ess_observed == updater.min_ess_observed
    assert restored.n_resamples == updater.n_resamples
    # the restored stream continues identically
    e = model.experiment(t=2.0)
    updater.update(0, e)
    restored.update(0, e)
    assert np.array_equal(restored.weights, updater.weights)
    assert np.array_equal(restored.locations, updater.locations)
