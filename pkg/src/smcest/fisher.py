"""Score, Fisher information, and estimation lower bounds.

Works for any finite-outcome model through numerical differentiation of
the log-likelihood: the score is computed by central differences with a
per-axis step scaled to the parameter's magnitude, the Fisher
information is the probability-weighted outer product of scores over
outcomes, and the information accumulated over an experiment list
inverts into the frequentist bound.  The Bayesian variant adds the
prior's own information, estimated by Monte Carlo over prior samples.
"""

import numpy as np

from .exceptions import (ConfigurationError, UnidentifiableParameterError,
                         UnsupportedDensityError)

__all__ = ["score", "fisher_information", "cramer_rao_bound",
           "van_trees_bound"]

DEFAULT_STEP = 1e-6

# Outcomes below this probability are dropped from information sums;
# their contribution is bounded by the cutoff and would otherwise
# produce 0 * inf artifacts.
PROB_CUTOFF = 1e-12


def _steps_for(params, step):
    params = np.atleast_2d(params)
    if step is None:
        return DEFAULT_STEP * np.maximum(1.0, np.abs(params))
    return np.broadcast_to(np.asarray(step, dtype=float), params.shape).copy()


def _likelihood_scalar_batch(model, outcome, params, expparams):
    return model.likelihood(np.array([outcome]), params, expparams)[0, :, 0]


def _score_batch(model, outcome, params, expparams, step=None):
    """Central-difference score rows for a batch of parameter vectors."""
    params = np.atleast_2d(np.asarray(params, dtype=float))
    n, d = params.shape
    center = _likelihood_scalar_batch(model, outcome, params, expparams)
    if np.any(center <= 0.0):
        raise ValueError(
            "outcome %d has zero likelihood at %d of the evaluation "
            "points; the score is undefined there"
            % (outcome, int(np.sum(center <= 0.0)))
        )
    steps = _steps_for(params, step)
    out = np.empty((n, d))
    for axis in range(d):
        shift = np.zeros_like(params)
        shift[:, axis] = steps[:, axis]
        upper = _likelihood_scalar_batch(model, outcome, params + shift, expparams)
        lower = _likelihood_scalar_batch(model, outcome, params - shift, expparams)
        if np.any(upper <= 0.0) or np.any(lower <= 0.0):
            raise ValueError(
                "outcome %d reaches zero likelihood within the finite-"
                "difference stencil; shrink the step" % outcome
            )
        out[:, axis] = (np.log(upper) - np.log(lower)) / (2.0 * steps[:, axis])
    return out


def score(model, outcome, modelparams, expparams, step=None):
    """Gradient of the log-likelihood of one outcome at one point.

    Parameters
    ----------
    outcome : int
        Outcome index whose log-likelihood is differentiated.
    modelparams : array_like
        A single parameter vector.
    step : float or array_like, optional
        Finite-difference step per axis; defaults to
        1e-6 * max(1, |x_i|).

    Returns
    -------
    ndarray
        Score vector of length n_modelparams.
    """
    modelparams = model.validate_modelparams(modelparams)
    expparams = model.canonicalize_expparams(expparams)
    return _score_batch(model, int(outcome), modelparams, expparams, step)[0]


def _information_batch(model, params, expparams, step=None):
    """Fisher information matrices for a batch of points, (n, d, d)."""
    params = np.atleast_2d(np.asarray(params, dtype=float))
    n, d = params.shape
    n_out = int(np.atleast_1d(model.n_outcomes(expparams))[0])
    info = np.zeros((n, d, d))
    probs = model.likelihood(np.arange(n_out), params, expparams)[:, :, 0]
    for outcome in range(n_out):
        p = probs[outcome]
        active = p > PROB_CUTOFF
        if not np.any(active):
            continue
        scores = np.zeros((n, d))
        scores[active] = _score_batch(
            model, outcome, params[active], expparams, step
        )
        info += (p * active)[:, np.newaxis, np.newaxis] * np.einsum(
            "ni,nj->nij", scores, scores
        )
    return (info + np.transpose(info, (0, 2, 1))) / 2.0


def fisher_information(model, modelparams, expparams, step=None):
    """Fisher information matrix of one experiment at one point.

    Sums Pr(d) * score(d) score(d)^T over the experiment's outcomes,
    dropping outcomes of probability below 1e-12.
    """
    modelparams = model.validate_modelparams(modelparams)
    expparams = model.canonicalize_expparams(expparams)
    if len(expparams) != 1:
        raise ConfigurationError("fisher_information takes one experiment")
    return _information_batch(model, modelparams, expparams, step)[0]


def _experiment_list(model, experiments):
    experiments = model.canonicalize_expparams(experiments)
    return [experiments[k:k + 1] for k in range(len(experiments))]


def _invert_information(total, d):
    eigvals, eigvecs = np.linalg.eigh(total)
    floor = 1e-10 * max(1.0, float(eigvals.max())) if eigvals.size else 0.0
    if eigvals.size == 0 or eigvals.min() <= floor:
        direction = eigvecs[:, 0] if eigvals.size else np.zeros(d)
        raise UnidentifiableParameterError(
            "total information is singular; the parameter combination %s "
            "cannot be identified from these experiments"
            % np.array2string(direction, precision=6),
            null_direction=direction,
        )
    inverse = (eigvecs / eigvals) @ eigvecs.T
    return (inverse + inverse.T) / 2.0


def cramer_rao_bound(model, modelparams, experiments, step=None):
    """Covariance lower bound from the summed information of experiments.

    Returns the inverse of the accumulated Fisher information.  Raises
    :class:`UnidentifiableParameterError`, naming the flat direction,
    when the accumulated information is singular.
    """
    modelparams = model.validate_modelparams(modelparams)
    d = model.n_modelparams
    total = np.zeros((d, d))
    for experiment in _experiment_list(model, experiments):
        total += _information_batch(model, modelparams, experiment, step)[0]
    return _invert_information(total, d)


def van_trees_bound(model, prior, experiments, rng, n_prior_samples=10000,
                    step=None):
    """Bayesian covariance lower bound averaged over the prior.

    Inverts E[FI] + J, where E[FI] is the Monte Carlo prior average of
    the experiments' accumulated Fisher information and J is the prior's
    own information, E[score_prior score_prior^T].  Requires a prior with
    an everywhere-differentiable density; flat priors with hard
    boundaries are rejected because their boundary terms break the
    bound's regularity conditions.
    """
    if not prior.smooth_density:
        raise UnsupportedDensityError(
            "the prior's density is not differentiable everywhere; use "
            "cramer_rao_bound at a point instead"
        )
    if n_prior_samples < 1:
        raise ConfigurationError("n_prior_samples must be >= 1")
    d = model.n_modelparams
    if prior.n_params != d:
        raise ConfigurationError("prior dimension does not match the model")
    samples = prior.sample(int(n_prior_samples), rng)
    mean_info = np.zeros((d, d))
    for experiment in _experiment_list(model, experiments):
        mean_info += _information_batch(model, samples, experiment, step).mean(axis=0)
    prior_scores = np.array([prior.score(x) for x in samples])
    prior_info = (prior_scores.T @ prior_scores) / len(samples)
    total = mean_info + (prior_info + prior_info.T) / 2.0
    return _invert_information(total, d)
