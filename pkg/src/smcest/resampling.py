"""Kernel-density resampling for impoverished particle filters.

The resampler draws a fresh, equally-weighted particle set approximating
the same distribution as its input: each new particle picks a parent in
proportion to the weights, contracts it toward the mean by a factor
``a``, and adds normal kernel noise of covariance (1 - a^2) times the
filter covariance.  That construction preserves the first two posterior
moments.  The limits a=1 and a=0 recover the multinomial bootstrap and
a single assumed-density normal, respectively.
"""

import warnings

import numpy as np

from .exceptions import ConfigurationError, ResamplingWarning
from .particles import ParticleFilter, particle_covariance, particle_mean

__all__ = ["LiuWestResampler", "should_resample"]

# Relative ridge applied before factorizing a near-singular kernel covariance.
COV_RIDGE = 1e-12


def should_resample(updater, ess=None):
    """True when the updater's ESS fell strictly below its trigger level.

    The trigger level is ``resample_threshold`` times the initial
    effective sample size; equality does not trigger.  A precomputed
    ``ess`` value may be passed to avoid recomputing it.
    """
    if ess is None:
        ess = updater.ess()
    return ess < updater.resample_threshold * updater.n_ess_initial


def _symmetric_sqrt(matrix):
    eigvals, eigvecs = np.linalg.eigh(matrix)
    return (eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))) @ eigvecs.T


class LiuWestResampler:
    """Moment-preserving kernel resampler.

    Parameters
    ----------
    a : float
        Contraction parameter in [0, 1].  The kernel width is
        h = sqrt(1 - a^2).  The default 0.98 is the conventional choice.
    max_redraw_attempts : int
        Rounds of kernel redraws granted to particles that land outside
        the model's valid region before their parent location is kept
        verbatim.
    """

    def __init__(self, a=0.98, max_redraw_attempts=10):
        if not 0.0 <= a <= 1.0:
            raise ConfigurationError("contraction parameter a must be in [0, 1]")
        if max_redraw_attempts < 0:
            raise ConfigurationError("max_redraw_attempts must be >= 0")
        self.a = float(a)
        self.h_squared = 1.0 - self.a ** 2
        self.max_redraw_attempts = int(max_redraw_attempts)

    def __call__(self, particles, model, rng):
        return self.resample(particles, model, rng)

    def resample(self, particles, model, rng):
        """Resample a filter, returning a new uniformly-weighted one.

        Parameters
        ----------
        particles : ParticleFilter
            Input filter; not modified.
        model : Model
            Supplies ``are_models_valid`` for redrawing invalid proposals.
        rng : numpy.random.Generator
            Stream for parent selection and kernel noise.
        """
        w = particles.weights
        x = particles.locations
        n, d = x.shape
        parents = rng.choice(n, size=n, p=w)
        if self.a == 1.0:
            new_locations = x[parents].copy()
        else:
            mean = particle_mean(w, x)
            cov = particle_covariance(w, x)
            trace = float(np.trace(cov))
            if trace <= 0.0 or np.all(x == x[0]):
                warnings.warn(
                    "filter covariance collapsed to zero; duplicating parents",
                    ResamplingWarning, stacklevel=2,
                )
                new_locations = x[parents].copy()
            else:
                kernel_cov = self.h_squared * cov + (COV_RIDGE * trace / d) * np.eye(d)
                root = _symmetric_sqrt(kernel_cov)
                centers = self.a * x[parents] + (1.0 - self.a) * mean
                new_locations = centers + rng.standard_normal((n, d)) @ root.T
                invalid = ~model.are_models_valid(new_locations)
                attempts = 0
                while np.any(invalid) and attempts < self.max_redraw_attempts:
                    idx = np.flatnonzero(invalid)
                    new_locations[idx] = (
                        centers[idx] + rng.standard_normal((len(idx), d)) @ root.T
                    )
                    invalid[idx] = ~model.are_models_valid(new_locations[idx])
                    attempts += 1
                if np.any(invalid):
                    idx = np.flatnonzero(invalid)
                    new_locations[idx] = x[parents[idx]]
                    warnings.warn(
                        "%d particle(s) exhausted kernel redraws; keeping "
                        "parent locations" % len(idx),
                        ResamplingWarning, stacklevel=2,
                    )
        return ParticleFilter(
            weights=np.full(n, 1.0 / n), locations=new_locations
        )
