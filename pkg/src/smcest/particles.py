"""Weighted-particle container and moment helpers.

A particle filter approximates a distribution by point masses: a weight
vector summing to one and a matrix of locations, one row per particle.
The helpers here are shared by the updater, the resampler, and the
region estimators.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ParticleFilter", "effective_sample_size", "particle_mean",
           "particle_covariance"]


def effective_sample_size(weights):
    """Effective sample size 1 / sum(w_k^2) of normalized weights.

    Summation is exactly rounded, so flat weights over n particles give
    exactly n and a delta weight vector gives exactly 1.
    """
    w = np.asarray(weights, dtype=float)
    return 1.0 / math.fsum(w * w)


def particle_mean(weights, locations):
    """Weighted mean over particles, shape (n_params,)."""
    return np.asarray(weights) @ np.asarray(locations)


def particle_covariance(weights, locations):
    """Weighted covariance about the weighted mean.

    Uses the shifted two-pass formula for stability on tight posteriors;
    the result is symmetrized exactly.
    """
    weights = np.asarray(weights, dtype=float)
    locations = np.atleast_2d(np.asarray(locations, dtype=float))
    centered = locations - particle_mean(weights, locations)
    cov = (weights[:, np.newaxis] * centered).T @ centered
    return (cov + cov.T) / 2.0


@dataclass
class ParticleFilter:
    """Weights plus locations of a discrete distribution approximation.

    Attributes
    ----------
    weights : ndarray
        (n_particles,) nonnegative weights summing to one.
    locations : ndarray
        (n_particles, n_params) particle positions.
    """

    weights: np.ndarray
    locations: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        self.locations = np.atleast_2d(np.asarray(self.locations, dtype=float))
        if self.weights.ndim != 1 or len(self.weights) != len(self.locations):
            raise ValueError("weights and locations must have matching length")

    @property
    def n_particles(self):
        return len(self.weights)

    @property
    def n_params(self):
        return self.locations.shape[1]

    def ess(self):
        return effective_sample_size(self.weights)

    def mean(self):
        return particle_mean(self.weights, self.locations)

    def covariance(self):
        return particle_covariance(self.weights, self.locations)
