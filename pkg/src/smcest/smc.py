"""Sequential Monte Carlo updater.

The updater carries a particle filter through Bayes updates: each datum
reweights the particles by its likelihood, the running product of
pre-normalization weight sums records the model evidence, and a
moment-preserving resampler restores numerical stability whenever the
effective sample size degrades past a threshold.

The updater is a single-writer state machine: exactly one caller may
mutate it at a time.  Read-only summaries (mean, covariance, regions)
may run concurrently between updates.
"""

import json
import math
import warnings

import numpy as np

from . import regions
from .exceptions import (ConfigurationError, DegeneracyError,
                         ImpoverishmentWarning, SmcestError)
from .particles import (ParticleFilter, effective_sample_size,
                        particle_covariance, particle_mean)
from .resampling import LiuWestResampler, should_resample

__all__ = ["SMCUpdater"]

# Fire the impoverishment diagnostic when the ESS ever drops this low.
ESS_WARN_LEVEL = 10.0


class SMCUpdater:
    """Posterior tracker for one model and one stream of data.

    Parameters
    ----------
    model : Model
        Likelihood model (possibly a derived-model chain).
    n_particles : int
        Number of particles; at least 2.
    prior : Distribution
        Prior over model parameters.  Draws falling outside the model's
        valid region are rejected and redrawn.
    rng : numpy.random.Generator
        The updater's private stream, used for resampling and any
        time-step kernel.
    resampler : callable, optional
        ``resampler(particles, model, rng) -> ParticleFilter``; defaults
        to a Liu-West resampler with a = 0.98.  ``None`` disables
        resampling entirely.
    resample_threshold : float
        Resample when ESS falls strictly below this fraction of the
        initial ESS.  Zero also disables resampling.
    """

    def __init__(self, model, n_particles, prior, rng,
                 resampler=LiuWestResampler(), resample_threshold=0.5,
                 max_init_retries=1000):
        if n_particles < 2:
            raise ConfigurationError("n_particles must be >= 2")
        if not 0.0 <= resample_threshold <= 1.0:
            raise ConfigurationError("resample_threshold must be in [0, 1]")
        self.model = model
        self.prior = prior
        self.rng = rng
        self.resampler = resampler
        self.resample_threshold = float(resample_threshold)
        n = int(n_particles)
        locations = prior.sample(n, rng)
        valid = model.are_models_valid(locations)
        retries = 0
        while not np.all(valid):
            retries += 1
            if retries > max_init_retries:
                raise ConfigurationError(
                    "could not draw %d valid particles from the prior after "
                    "%d retries; prior and model validity region are "
                    "incompatible" % (n, max_init_retries)
                )
            bad = np.flatnonzero(~valid)
            locations[bad] = prior.sample(len(bad), rng)
            valid[bad] = model.are_models_valid(locations[bad])
        self.weights = np.full(n, 1.0 / n)
        self.locations = locations
        self.n_ess_initial = float(n)
        self._min_ess = float(n)
        self._normalization_record = []
        self._data_count = 0
        self._n_resamples = 0

    # -- bookkeeping properties -------------------------------------------

    @property
    def n_particles(self):
        return len(self.weights)

    @property
    def particles(self):
        """Snapshot of the current filter (copies)."""
        return ParticleFilter(self.weights.copy(), self.locations.copy())

    @property
    def normalization_record(self):
        """Pre-normalization weight sums, one entry per datum."""
        return np.array(self._normalization_record)

    @property
    def data_count(self):
        return self._data_count

    @property
    def min_ess_observed(self):
        """Smallest (pre-resample) ESS seen so far; a filter-health gauge."""
        return self._min_ess

    @property
    def n_resamples(self):
        return self._n_resamples

    # -- the Bayes update --------------------------------------------------

    def update(self, outcome, expparams):
        """Condition the filter on one datum.

        Multiplies each weight by the datum's likelihood at the particle,
        renormalizes, applies the model's time-step kernel when it has
        one, and resamples when the effective sample size has fallen
        below threshold.

        Raises
        ------
        DegeneracyError
            When the datum has zero likelihood under every particle,
            which signals a misspecified model.
        """
        expparams = self.model.canonicalize_expparams(expparams)
        if len(expparams) != 1:
            raise ConfigurationError("update processes one experiment at a time")
        outcome = int(outcome)
        likelihoods = self.model.likelihood(
            np.array([outcome]), self.locations, expparams
        )[0, :, 0]
        unnormalized = self.weights * likelihoods
        total = float(unnormalized.sum())
        if not math.isfinite(total) or total <= 0.0:
            raise DegeneracyError(
                "datum %d has zero posterior weight under every particle "
                "(weight sum %r); the model cannot explain it" % (outcome, total)
            )
        self._normalization_record.append(total)
        self.weights = unnormalized / total
        self._data_count += 1
        if self.model.has_timestep:
            self.locations = self.model.update_timestep(
                self.locations, expparams, self.rng
            )[:, :, 0]
        ess_fast = 1.0 / float(self.weights @ self.weights)
        if ess_fast < self._min_ess:
            self._min_ess = ess_fast
        if ess_fast <= ESS_WARN_LEVEL:
            warnings.warn(
                "effective sample size %.2f <= %g; the filter is badly "
                "impoverished and its output may be unreliable"
                % (ess_fast, ESS_WARN_LEVEL),
                ImpoverishmentWarning, stacklevel=2,
            )
        if self.resampler is not None and should_resample(self, ess=ess_fast):
            self._resample()

    def batch_update(self, outcomes, expparams):
        """Update once per (outcome, experiment) row, in order."""
        expparams = self.model.canonicalize_expparams(expparams)
        outcomes = np.atleast_1d(outcomes)
        if len(outcomes) != len(expparams):
            raise ConfigurationError("outcomes and experiments must pair up")
        for d, e in zip(outcomes, expparams):
            self.update(d, np.array([e], dtype=expparams.dtype))

    def _resample(self):
        new = self.resampler(self.particles, self.model, self.rng)
        self.weights = new.weights
        self.locations = new.locations
        self._n_resamples += 1

    # -- posterior summaries ------------------------------------------------

    def ess(self):
        """Effective sample size 1 / sum(w^2), exactly rounded."""
        return effective_sample_size(self.weights)

    def est_mean(self):
        """Posterior mean estimate, shape (n_modelparams,)."""
        return particle_mean(self.weights, self.locations)

    def est_covariance(self):
        """Posterior covariance about the mean estimate."""
        return particle_covariance(self.weights, self.locations)

    def log_evidence(self):
        """Log marginal likelihood of everything seen so far.

        The empty product over no data gives 0.
        """
        return float(np.sum(np.log(self.normalization_record))) \
            if self._normalization_record else 0.0

    def bayes_factor(self, other):
        """Evidence ratio of this updater's model over another's.

        Both updaters must have processed the identical datum sequence
        (caller contract).
        """
        if not self._normalization_record or not other._normalization_record:
            raise SmcestError(
                "bayes_factor needs both updaters to have processed data"
            )
        return float(np.exp(self.log_evidence() - other.log_evidence()))

    def hypothetical_update_variance(self, expparams):
        """Expected posterior variance after a candidate experiment.

        Sums Pr(d) * trace(Cov | d) over the experiment's outcomes using
        hypothetical weight updates; the filter itself is not touched.
        Smaller is better when choosing what to measure next.
        """
        expparams = self.model.canonicalize_expparams(expparams)
        if len(expparams) != 1:
            raise ConfigurationError("evaluate one candidate experiment at a time")
        n_out = int(np.atleast_1d(self.model.n_outcomes(expparams))[0])
        likelihoods = self.model.likelihood(
            np.arange(n_out), self.locations, expparams
        )[:, :, 0]
        expected = 0.0
        for d in range(n_out):
            unnormalized = self.weights * likelihoods[d]
            pr_d = float(unnormalized.sum())
            if pr_d <= 0.0:
                continue
            hypothetical = unnormalized / pr_d
            cov = particle_covariance(hypothetical, self.locations)
            expected += pr_d * float(np.trace(cov))
        return expected

    # -- region estimation ---------------------------------------------------

    def est_credible_region(self, alpha):
        """Indices of the smallest particle set carrying mass >= alpha."""
        return regions.est_credible_region(self.weights, alpha)

    def region_est_hull(self, alpha):
        """Convex hull of the alpha-credible particles."""
        return regions.region_est_hull(self.weights, self.locations, alpha)

    def region_est_ellipsoid(self, alpha, tol=1e-6):
        """Minimum-volume enclosing ellipsoid of the credible hull."""
        return regions.region_est_ellipsoid(
            self.weights, self.locations, alpha, tol=tol
        )

    def covariance_ellipsoid(self, scale=1.0):
        """Covariance ellipsoid centered on the posterior mean."""
        return regions.covariance_ellipsoid(
            self.est_mean(), self.est_covariance(), scale=scale
        )

    # -- snapshot serialization ----------------------------------------------

    def save_state(self, path):
        """Write a binary-exact snapshot for resume and audit.

        The snapshot is a ``.npz`` archive holding the float64 weight and
        location arrays bit-for-bit, the normalization record, the
        bookkeeping scalars, and the updater stream's bit-generator state
        as JSON.
        """
        rng_state = json.dumps(self.rng.bit_generator.state)
        np.savez(
            path,
            weights=self.weights,
            locations=self.locations,
            normalization_record=self.normalization_record,
            n_ess_initial=np.float64(self.n_ess_initial),
            min_ess_observed=np.float64(self._min_ess),
            data_count=np.int64(self._data_count),
            n_resamples=np.int64(self._n_resamples),
            rng_state=np.array(rng_state),
        )

    @classmethod
    def load_state(cls, model, path, resampler=LiuWestResampler(),
                   resample_threshold=0.5):
        """Rebuild an updater from :meth:`save_state` output.

        The model (and resampler configuration) are not stored in the
        snapshot and must be supplied again.
        """
        with np.load(path) as archive:
            updater = cls.__new__(cls)
            updater.model = model
            updater.prior = None
            updater.resampler = resampler
            updater.resample_threshold = float(resample_threshold)
            updater.weights = archive["weights"]
            updater.locations = archive["locations"]
            updater.n_ess_initial = float(archive["n_ess_initial"])
            updater._min_ess = float(archive["min_ess_observed"])
            updater._normalization_record = list(archive["normalization_record"])
            updater._data_count = int(archive["data_count"])
            updater._n_resamples = int(archive["n_resamples"])
            rng = np.random.default_rng()
            rng.bit_generator.state = json.loads(str(archive["rng_state"]))
            updater.rng = rng
        return updater
