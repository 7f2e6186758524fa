"""Performance and robustness testing.

Runs many independent simulated estimation trials and records the
squared estimation error after each experiment.  Averaging the loss over
trials gives the risk of the procedure at a fixed true model, or the
Bayes risk when each trial draws its truth from the prior.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigurationError, SmcestError
from .resampling import LiuWestResampler
from .smc import SMCUpdater

__all__ = ["TrialMatrix", "run_trial", "perf_test_multiple", "risk"]


@dataclass
class TrialMatrix:
    """Per-trial, per-experiment loss records.

    Attributes
    ----------
    loss : ndarray
        (n_trials, n_experiments) squared-error loss; rows of failed
        trials are NaN and flagged in ``failed``.
    true_params, estimates : ndarray
        Per-trial true parameter vectors and final mean estimates.
    failed : ndarray
        Boolean mask of trials that raised instead of finishing.
    """

    loss: np.ndarray
    true_params: np.ndarray
    estimates: np.ndarray
    failed: np.ndarray

    @property
    def n_trials(self):
        return self.loss.shape[0]

    @property
    def n_experiments(self):
        return self.loss.shape[1]


def _draw_true_params(model, prior, rng, max_retries=1000):
    for _ in range(max_retries):
        candidate = prior.sample(1, rng)
        if bool(model.are_models_valid(candidate)[0]):
            return candidate
    raise ConfigurationError("could not draw a valid true model from the prior")


def run_trial(model, n_particles, prior, n_experiments, heuristic_factory,
              rng, true_params=None, resampler=LiuWestResampler(),
              resample_threshold=0.5):
    """Run one simulated estimation trial.

    Designs each experiment with the heuristic, simulates the datum from
    the true parameters, updates the posterior, and records the squared
    error of the running mean estimate.

    Parameters
    ----------
    heuristic_factory : callable
        Called with the freshly built updater; returns the heuristic.
    true_params : array_like, optional
        Fixed truth; drawn from the prior when omitted.
    rng : numpy.random.Generator
        Drives the particle init, the prior truth draw when needed, and
        the simulated data, in that order.

    Returns
    -------
    (loss, updater, true_params)
        Loss vector over experiments, the final updater state, and the
        truth the data was simulated from (one row).
    """
    updater = SMCUpdater(model, n_particles, prior, rng,
                         resampler=resampler,
                         resample_threshold=resample_threshold)
    heuristic = heuristic_factory(updater)
    if true_params is None:
        true_params = _draw_true_params(model, prior, rng)
    true_params = model.validate_modelparams(true_params)
    truth = true_params[0]
    loss = np.zeros(int(n_experiments))
    for k in range(int(n_experiments)):
        experiment = heuristic()
        datum = model.simulate_experiment(true_params, experiment, rng)
        updater.update(datum, experiment)
        delta = updater.est_mean() - truth
        loss[k] = float(delta @ delta)
    return loss, updater, true_params


def _run_one(args):
    (model, n_particles, prior, n_experiments, heuristic_factory,
     true_params, resampler, resample_threshold, seed) = args
    rng = np.random.default_rng(seed)
    try:
        loss, updater, truth = run_trial(
            model, n_particles, prior, n_experiments, heuristic_factory,
            rng, true_params=true_params, resampler=resampler,
            resample_threshold=resample_threshold,
        )
        return loss, truth[0], updater.est_mean(), None
    except SmcestError as err:
        return None, None, None, str(err)


def perf_test_multiple(n_trials, model, n_particles, prior, n_experiments,
                       heuristic_factory, rng, true_params=None,
                       resampler=LiuWestResampler(), resample_threshold=0.5,
                       n_workers=1):
    """Run many independent trials, serially or across worker processes.

    Each trial is seeded from a stream spawned off ``rng``, so the
    resulting :class:`TrialMatrix` is identical whether trials run
    serially or in parallel.  A trial that raises is masked in the output
    rather than aborting the batch.  Parallel runs need picklable
    arguments; the built-in heuristic classes and models all qualify.
    """
    if n_trials < 1:
        raise ConfigurationError("n_trials must be >= 1")
    n_trials = int(n_trials)
    seeds = rng.spawn(n_trials)
    payloads = [
        (model, n_particles, prior, n_experiments, heuristic_factory,
         true_params, resampler, resample_threshold, seeds[t])
        for t in range(n_trials)
    ]
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=int(n_workers)) as pool:
            results = list(pool.map(_run_one, payloads))
    else:
        results = [_run_one(p) for p in payloads]
    d = model.n_modelparams
    loss = np.full((n_trials, int(n_experiments)), np.nan)
    truths = np.full((n_trials, d), np.nan)
    estimates = np.full((n_trials, d), np.nan)
    failed = np.zeros(n_trials, dtype=bool)
    for t, (trial_loss, truth, estimate, error) in enumerate(results):
        if error is not None:
            failed[t] = True
            continue
        loss[t] = trial_loss
        truths[t] = truth
        estimates[t] = estimate
    return TrialMatrix(loss=loss, true_params=truths, estimates=estimates,
                       failed=failed)


def risk(trials):
    """Mean loss per experiment index over the successful trials.

    This is the frequentist risk when the batch ran at a fixed truth and
    the Bayes risk when each trial drew its truth from the prior.
    """
    if trials.loss.size == 0:
        raise ConfigurationError("trial matrix is empty")
    ok = ~trials.failed
    if not np.any(ok):
        raise ConfigurationError("every trial failed; no risk to report")
    return trials.loss[ok].mean(axis=0)
