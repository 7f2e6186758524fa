"""Shared test doubles.

Small models with analytically transparent likelihoods, used to pin the
updater and harness behavior without trusting any production model.
"""

import numpy as np
import pytest

from smcest.model import FiniteOutcomeModel, TwoOutcomeModel


class IdentityLikelihoodModel(TwoOutcomeModel):
    """pr0 equals the particle's single parameter value.

    Lets a test choose arbitrary per-particle likelihoods by placing
    particles: a particle at location q has Pr(outcome 0) = q.
    """

    @property
    def n_modelparams(self):
        return 1

    @property
    def expparams_dtype(self):
        return [("dummy", "float")]

    def are_models_valid(self, modelparams):
        q = self.canonicalize_modelparams(modelparams)[:, 0]
        return (q >= 0.0) & (q <= 1.0)

    def pr0(self, modelparams, expparams):
        return np.repeat(modelparams[:, :1], len(expparams), axis=1)


class ConstantLikelihoodModel(TwoOutcomeModel):
    """Uninformative model: pr0 is the same constant everywhere."""

    def __init__(self, p0=0.5):
        self.p0 = float(p0)

    @property
    def n_modelparams(self):
        return 1

    @property
    def expparams_dtype(self):
        return [("dummy", "float")]

    def are_models_valid(self, modelparams):
        return np.ones(len(self.canonicalize_modelparams(modelparams)), bool)

    def pr0(self, modelparams, expparams):
        return np.full((modelparams.shape[0], len(expparams)), self.p0)


class BinIndicatorModel(FiniteOutcomeModel):
    """Perfect-information model: the datum reveals the parameter's bin.

    Outcome d has probability 1 exactly when floor(x * n_bins) == d, so a
    single datum collapses the posterior onto one bin of [0, 1).
    """

    def __init__(self, n_bins=1000):
        self.n_bins = int(n_bins)

    @property
    def n_modelparams(self):
        return 1

    @property
    def expparams_dtype(self):
        return [("dummy", "float")]

    def are_models_valid(self, modelparams):
        x = self.canonicalize_modelparams(modelparams)[:, 0]
        return (x >= 0.0) & (x < 1.0)

    def n_outcomes(self, expparams):
        expparams = self.canonicalize_expparams(expparams)
        return np.full(len(expparams), self.n_bins, dtype=int)

    def likelihood(self, outcomes, modelparams, expparams):
        modelparams = self.validate_modelparams(modelparams)
        expparams = self.canonicalize_expparams(expparams)
        outcomes = np.atleast_1d(np.asarray(outcomes, dtype=int))
        bins = np.floor(modelparams[:, 0] * self.n_bins).astype(int)
        hit = (outcomes[:, np.newaxis] == bins[np.newaxis, :]).astype(float)
        return np.repeat(hit[:, :, np.newaxis], len(expparams), axis=2)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
